#include "wpt/config.hpp"

#include <fstream>
#include <sstream>

#include "wpt/error.hpp"

namespace wpt {
namespace {

using nlohmann::json;

/// Reads typed fields out of one JSON object and accumulates every problem
/// instead of stopping at the first.
class Reader {
public:
  Reader(const json& obj, std::string where, std::vector<std::string>& errors)
      : obj_(obj), where_(std::move(where)), errors_(errors) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  std::optional<double> number(const char* key, bool required) {
    if (!obj_.is_object() || !obj_.contains(key)) {
      if (required) fail(key, "is required");
      return std::nullopt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      fail(key, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  double positive(const char* key, double fallback = 0, bool required = true) {
    auto v = number(key, required);
    if (!v) return fallback;
    if (!(*v > 0)) fail(key, "must be positive");
    return *v;
  }

  double non_negative(const char* key, double fallback, bool required) {
    auto v = number(key, required);
    if (!v) return fallback;
    if (!(*v >= 0)) fail(key, "must be non-negative");
    return *v;
  }

  int integer(const char* key, int fallback, bool required, int minimum) {
    if (!obj_.is_object() || !obj_.contains(key)) {
      if (required) fail(key, "is required");
      return fallback;
    }
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "must be an integer");
      return fallback;
    }
    const auto n = v.get<long long>();
    if (n < minimum || n > 1'000'000) {
      fail(key, "must be between " + std::to_string(minimum) + " and 1000000");
      return fallback;
    }
    return static_cast<int>(n);
  }

  std::optional<std::string> string(const char* key) {
    if (!obj_.is_object() || !obj_.contains(key)) return std::nullopt;
    const json& v = obj_.at(key);
    if (!v.is_string()) {
      fail(key, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  bool has(const char* key) const { return obj_.is_object() && obj_.contains(key); }
  const json& at(const char* key) const { return obj_.at(key); }

  void fail(const std::string& key, const std::string& msg) {
    errors_.push_back(where_ + (key.empty() ? "" : "." + key) + " " + msg);
  }

private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& errors_;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

SpiralCoild read_coil(const json& j, const std::string& where, std::vector<std::string>& errors) {
  Reader r(j, where, errors);
  SpiralCoild coil;
  coil.inner_diameter = r.positive("inner_diameter_mm") * 1e-3;
  coil.outer_diameter = r.positive("outer_diameter_mm") * 1e-3;
  coil.turns = r.integer("turns", 1, true, 1);
  coil.trace_width = r.positive("trace_width_mm") * 1e-3;
  coil.turn_spacing = r.non_negative("spacing_mm", 0, true) * 1e-3;
  coil.trace_thickness = r.positive("trace_thickness_um", kDefaultTraceThickness * 1e6, false) * 1e-6;
  coil.resistivity = r.positive("resistivity_ohm_m", kCopperResistivity, false);
  if (coil.inner_diameter > 0 && coil.outer_diameter > 0 && !(coil.outer_diameter > coil.inner_diameter)) {
    r.fail("outer_diameter_mm", "must exceed inner_diameter_mm");
  }
  return coil;
}

CircuitConfig read_circuit(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "circuit", errors);
  CircuitConfig c;
  if (auto t = r.string("topology")) {
    if (auto parsed = parse_topology(*t)) {
      c.params.topology = *parsed;
    } else {
      r.fail("topology", "must be one of SS, SP, PS, PP");
    }
  }
  c.params.C1 = r.positive("c1_nF") * 1e-9;
  c.params.C2 = r.positive("c2_nF") * 1e-9;
  c.r1_given = r.has("r1_ohm");
  c.r2_given = r.has("r2_ohm");
  c.params.R1 = r.non_negative("r1_ohm", 0, false);
  c.params.R2 = r.non_negative("r2_ohm", 0, false);
  c.params.R_load = r.positive("r_load_ohm");
  c.params.source_peak_to_peak = r.non_negative("vin_pp", 0, true);
  c.params.frequency = r.positive("freq_hz");
  c.params.source_resistance = r.non_negative("source_resistance_ohm", 0, false);
  if (r.has("m_nH")) c.mutual = r.non_negative("m_nH", 0, true) * 1e-9;
  return c;
}

SweepConfig read_sweep(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "sweep", errors);
  SweepConfig s;
  if (auto kind = r.string("kind"); kind && *kind != "freq" && *kind != "gap") {
    r.fail("kind", "must be \"freq\" or \"gap\"");
  }
  s.f_start = r.positive("f_start_hz", s.f_start, false);
  s.f_stop = r.positive("f_stop_hz", s.f_stop, false);
  if (!(s.f_stop > s.f_start)) r.fail("f_stop_hz", "must exceed f_start_hz");
  s.points = r.integer("points", s.points, false, 2);
  if (auto sp = r.string("spacing")) {
    if (*sp == "linear") {
      s.spacing = Spacing::Linear;
    } else if (*sp == "log") {
      s.spacing = Spacing::Log;
    } else {
      r.fail("spacing", "must be \"linear\" or \"log\"");
    }
  }
  if (r.has("gaps_mm")) {
    const json& g = r.at("gaps_mm");
    if (!g.is_array() || g.empty()) {
      r.fail("gaps_mm", "must be a non-empty array");
    } else {
      for (const auto& v : g) {
        if (!v.is_number() || !(v.get<double>() > 0)) {
          r.fail("gaps_mm", "entries must be positive numbers");
          break;
        }
        s.gaps.push_back(v.get<double>() * 1e-3);
      }
    }
  } else if (r.has("gap_start_mm") || r.has("gap_stop_mm")) {
    const double lo = r.positive("gap_start_mm");
    const double hi = r.positive("gap_stop_mm");
    const int n = r.integer("gap_points", 11, false, 1);
    if (!(hi >= lo)) r.fail("gap_stop_mm", "must not be below gap_start_mm");
    for (int i = 0; i < n; ++i) {
      s.gaps.push_back((n == 1 ? lo : lo + (hi - lo) * i / (n - 1)) * 1e-3);
    }
  } else {
    s.gaps = {5e-3, 10e-3, 15e-3};
  }
  return s;
}

FieldMapConfig read_field_map(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "field_map", errors);
  FieldMapConfig f;
  if (auto c = r.string("coil")) {
    if (*c != "tx" && *c != "rx") r.fail("coil", "must be \"tx\" or \"rx\"");
    f.coil = *c;
  }
  if (auto i = r.number("current_a", false)) f.current = *i;
  auto& g = f.grid;
  if (auto v = r.number("x_min_mm", false)) g.x_min = *v * 1e-3;
  if (auto v = r.number("x_max_mm", false)) g.x_max = *v * 1e-3;
  if (auto v = r.number("z_min_mm", false)) g.z_min = *v * 1e-3;
  if (auto v = r.number("z_max_mm", false)) g.z_max = *v * 1e-3;
  g.nx = r.integer("nx", g.nx, false, 1);
  g.nz = r.integer("nz", g.nz, false, 1);
  g.segments_per_filament = r.integer("segments", g.segments_per_filament, false, 3);
  g.subdivisions = r.integer("subdivisions", g.subdivisions, false, 1);
  if (g.x_max < g.x_min) r.fail("x_max_mm", "must not be below x_min_mm");
  if (g.z_max < g.z_min) r.fail("z_max_mm", "must not be below z_min_mm");
  return f;
}

FitConfig read_fit(const json& j, const std::filesystem::path& base_dir, std::vector<std::string>& errors) {
  Reader r(j, "fit", errors);
  FitConfig f;
  if (r.has("p_load_w")) f.anchors.p_load = r.positive("p_load_w");
  if (r.has("efficiency")) {
    const double e = r.positive("efficiency");
    if (e > 1) r.fail("efficiency", "must not exceed 1");
    f.anchors.efficiency = e;
  }
  if (r.has("measurements")) {
    const json& m = r.at("measurements");
    if (!m.is_array()) {
      r.fail("measurements", "must be an array of {gap_mm, vrms_V}");
    } else {
      for (const auto& row : m) {
        std::vector<std::string> row_errors;
        Reader rr(row, "fit.measurements[]", row_errors);
        GapVoltage gv{rr.positive("gap_mm") * 1e-3, rr.non_negative("vrms_V", 0, true)};
        if (row_errors.empty()) {
          f.anchors.points.push_back(gv);
        } else {
          errors.insert(errors.end(), row_errors.begin(), row_errors.end());
        }
      }
    }
  }
  if (auto path = r.string("measurements_csv")) {
    std::filesystem::path p(*path);
    if (p.is_relative()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) {
      r.fail("measurements_csv", "cannot open " + p.string());
    } else {
      try {
        auto rows = read_measurements_csv(in);
        f.anchors.points.insert(f.anchors.points.end(), rows.begin(), rows.end());
      } catch (const Error& e) {
        r.fail("measurements_csv", e.what());
      }
    }
  }
  try {
    f.anchors.validate();
  } catch (const Error& e) {
    r.fail("", e.what());
  }
  return f;
}

DesignConfig read_design(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "design", errors);
  DesignConfig d;
  auto& c = d.constraints;
  c.inner_diameter = r.positive("inner_diameter_mm") * 1e-3;
  c.trace_width = r.positive("trace_width_mm") * 1e-3;
  c.spacing = r.non_negative("spacing_mm", 0, true) * 1e-3;
  c.turns_min = r.integer("turns_min", 1, false, 1);
  c.turns_max = r.integer("turns_max", 20, false, 1);
  if (c.turns_max < c.turns_min) r.fail("turns_max", "must not be below turns_min");
  c.target_inductance = r.positive("target_uH") * 1e-6;
  c.tolerance = r.positive("tolerance", c.tolerance, false);
  c.trace_thickness = r.positive("trace_thickness_um", kDefaultTraceThickness * 1e6, false) * 1e-6;
  c.resistivity = r.positive("resistivity_ohm_m", kCopperResistivity, false);
  if (r.has("f0_hz")) d.f0 = r.positive("f0_hz");
  return d;
}

}  // namespace

SpiralCoild parse_coil(const nlohmann::json& j, const std::string& where) {
  std::vector<std::string> errors;
  auto coil = read_coil(j, where, errors);
  if (!errors.empty()) throw ValidationError(join(errors));
  return coil;
}

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  std::vector<std::string> errors;
  RunConfig cfg;
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");

  if (j.contains("tx_coil")) cfg.tx_coil = read_coil(j.at("tx_coil"), "tx_coil", errors);
  if (j.contains("rx_coil")) cfg.rx_coil = read_coil(j.at("rx_coil"), "rx_coil", errors);
  if (j.contains("circuit")) cfg.circuit = read_circuit(j.at("circuit"), errors);
  if (j.contains("sweep")) cfg.sweep = read_sweep(j.at("sweep"), errors);
  if (j.contains("field_map")) cfg.field_map = read_field_map(j.at("field_map"), errors);
  if (j.contains("fit")) cfg.fit = read_fit(j.at("fit"), base_dir, errors);
  if (j.contains("design")) cfg.design = read_design(j.at("design"), errors);

  Reader root(j, "config", errors);
  cfg.gap = root.positive("gap_mm", cfg.gap * 1e3, false) * 1e-3;
  cfg.subdivisions = root.integer("subdivisions", cfg.subdivisions, false, 1);
  if (auto dir = root.string("out_dir")) {
    std::filesystem::path d(*dir);
    cfg.out_dir = (d.is_relative() && !base_dir.empty() ? base_dir / d : d).string();
  }
  if (auto fmt = root.string("format")) {
    if (*fmt != "csv" && *fmt != "json") root.fail("format", "must be \"csv\" or \"json\"");
    cfg.format = *fmt;
  }

  if (!errors.empty()) throw ValidationError(join(errors));

  for (const auto* which : {"tx_coil", "rx_coil"}) {
    const auto& coil = std::string(which) == "tx_coil" ? cfg.tx_coil : cfg.rx_coil;
    if (coil && !is_geometrically_consistent(*coil)) {
      std::ostringstream msg;
      msg << which << " outer diameter deviates " << geometric_mismatch(*coil) * 100
          << " % from inner_diameter + 2 turns (width + spacing)";
      cfg.warnings.push_back(msg.str());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path());
}

std::vector<GapVoltage> read_measurements_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("measurement CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "gap_mm,vrms_V") throw ValidationError("measurement CSV header must be gap_mm,vrms_V");

  std::vector<GapVoltage> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    double gap_mm = 0, vrms = 0;
    char comma = 0;
    if (!(ss >> gap_mm >> comma >> vrms) || comma != ',') {
      throw ValidationError("measurement CSV line " + std::to_string(lineno) + " is malformed");
    }
    rows.push_back({gap_mm * 1e-3, vrms});
  }
  return rows;
}

CircuitParamsd resolved_circuit(const RunConfig& config) {
  if (!config.circuit) throw ValidationError("config.circuit is required");
  CircuitParamsd p = config.circuit->params;
  if (!config.circuit->r1_given) {
    if (!config.tx_coil) throw ValidationError("circuit.r1_ohm or tx_coil is required");
    p.R1 = series_resistance(*config.tx_coil, p.frequency);
  }
  if (!config.circuit->r2_given) {
    if (!config.rx_coil) throw ValidationError("circuit.r2_ohm or rx_coil is required");
    p.R2 = series_resistance(*config.rx_coil, p.frequency);
  }
  return p;
}

}  // namespace wpt
