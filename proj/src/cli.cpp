#include "wpt/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "wpt/analysis.hpp"
#include "wpt/config.hpp"
#include "wpt/design.hpp"
#include "wpt/error.hpp"
#include "wpt/serialize.hpp"

namespace wpt::cli {
namespace {

struct Options {
  std::string config;
  std::string out_dir;
  std::string format;
  bool quiet{false};
  std::optional<double> gap_mm;
  std::optional<double> m_nh;
  std::optional<double> freq_hz;
  std::optional<int> subdivisions;
};

struct Output {
  std::string name;
  std::string contents;
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

const SpiralCoild& need_coil(const std::optional<SpiralCoild>& coil, const char* name) {
  if (!coil) throw ValidationError(std::string("config.") + name + " is required");
  return *coil;
}

class Session {
public:
  Session(Options opt, RunConfig cfg) : opt_(opt), cfg_(std::move(cfg)) {
    if (opt_.gap_mm) {
      if (!(*opt_.gap_mm > 0)) throw ValidationError("--gap-mm must be positive");
      cfg_.gap = *opt_.gap_mm * 1e-3;
    }
    if (opt_.subdivisions) cfg_.subdivisions = *opt_.subdivisions;
    if (opt_.format.empty()) opt_.format = cfg_.format;
    if (opt_.out_dir.empty()) opt_.out_dir = cfg_.out_dir;
  }

  const Options& options() const { return opt_; }

  bool json_format() const { return opt_.format == "json"; }

  std::vector<Output> coil() {
    if (!cfg_.tx_coil && !cfg_.rx_coil) throw ValidationError("config.tx_coil or config.rx_coil is required");
    double f = 3e6;
    if (cfg_.circuit) f = cfg_.circuit->params.frequency;
    if (opt_.freq_hz) f = *opt_.freq_hz;

    nlohmann::json j = nlohmann::json::object();
    std::ostringstream text;
    auto report = [&](const std::optional<SpiralCoild>& coil, const char* key, const char* label) {
      if (!coil) return;
      j[key] = coil_report(*coil, f);
      text << "L" << label << " = " << format_number(std::round(self_inductance(*coil) * 1e9) / 1e3) << " uH\n";
      text << key << ".inductance_H = " << format_number(self_inductance(*coil)) << '\n';
      text << key << ".fill_factor = " << format_number(fill_factor(*coil)) << '\n';
      text << key << ".average_diameter_mm = " << format_number(average_diameter(*coil) * 1e3) << '\n';
      text << key << ".resistance_ohm@" << format_number(f) << "Hz = " << format_number(series_resistance(*coil, f))
           << '\n';
    };
    report(cfg_.tx_coil, "tx", "t");
    report(cfg_.rx_coil, "rx", "r");
    if (json_format()) return {{"coil.json", dump(j)}};
    return {{"coil.txt", text.str()}};
  }

  CouplingLinkd link() {
    const auto& tx = need_coil(cfg_.tx_coil, "tx_coil");
    const auto& rx = need_coil(cfg_.rx_coil, "rx_coil");
    const double L1 = self_inductance(tx);
    const double L2 = self_inductance(rx);
    double M;
    if (opt_.m_nh) {
      M = *opt_.m_nh * 1e-9;
    } else if (cfg_.circuit && cfg_.circuit->mutual) {
      M = *cfg_.circuit->mutual;
    } else {
      M = mutual_inductance_coils(tx, rx, cfg_.gap, cfg_.subdivisions);
    }
    return make_link(L1, L2, M);
  }

  nlohmann::json link_json(const CouplingLinkd& l) const {
    return {{"L1_uH", l.L1 * 1e6}, {"L2_uH", l.L2 * 1e6}, {"M_nH", l.M * 1e9}, {"k", l.k}, {"gap_mm", cfg_.gap * 1e3}};
  }

  std::vector<Output> couple() {
    const auto l = link();
    if (json_format()) return {{"couple.json", dump(link_json(l))}};
    std::ostringstream text;
    text << "gap_mm = " << format_number(cfg_.gap * 1e3) << '\n'
         << "M_nH = " << format_number(l.M * 1e9) << '\n'
         << "k = " << format_number(l.k) << '\n';
    return {{"couple.txt", text.str()}};
  }

  std::vector<Output> solve() {
    const auto params = resolved_circuit(cfg_);
    const auto l = link();
    const auto s = solve_phasor(params, l);
    nlohmann::json j{{"topology", std::string(to_string(params.topology))},
                     {"frequency_hz", params.frequency},
                     {"R1_ohm", params.R1},
                     {"R2_ohm", params.R2},
                     {"link", link_json(l)},
                     {"solution", to_json(s)}};
    return {{"solve.json", dump(j)}};
  }

  std::vector<Output> sweep_table(const SweepTable& table, const std::string& stem) {
    if (json_format()) return {{stem + ".json", dump(to_json(table))}};
    std::ostringstream csv;
    write_sweep_csv(csv, table);
    return {{stem + ".csv", csv.str()}};
  }

  std::vector<Output> sweep_freq() {
    const auto params = resolved_circuit(cfg_);
    const SweepConfig sweep = cfg_.sweep.value_or(SweepConfig{});
    return sweep_table(frequency_sweep(params, link(), sweep.f_start, sweep.f_stop, sweep.points, sweep.spacing),
                       "sweep_freq");
  }

  std::vector<Output> sweep_gap() {
    const auto params = resolved_circuit(cfg_);
    const SweepConfig sweep = cfg_.sweep.value_or(SweepConfig{{}, {}, {}, {}, {5e-3, 10e-3, 15e-3}});
    return sweep_table(gap_sweep(params, need_coil(cfg_.tx_coil, "tx_coil"), need_coil(cfg_.rx_coil, "rx_coil"),
                                 sweep.gaps, cfg_.subdivisions),
                       "sweep_gap");
  }

  std::vector<Output> field() {
    const FieldMapConfig fm = cfg_.field_map.value_or(FieldMapConfig{});
    const auto& coil = fm.coil == "rx" ? need_coil(cfg_.rx_coil, "rx_coil") : need_coil(cfg_.tx_coil, "tx_coil");
    const auto grid = field_map(coil, fm.current, fm.grid);
    auto summary = field_summary(grid);
    summary["coil"] = fm.coil;
    summary["current_A"] = fm.current;
    std::ostringstream csv;
    write_field_csv(csv, grid);
    if (json_format()) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& s : grid.samples) {
        if (s.valid) {
          rows.push_back({s.x, s.z, s.B.x(), s.B.y(), s.B.z(), s.B.norm()});
        } else {
          rows.push_back({s.x, s.z, nullptr, nullptr, nullptr, nullptr});
        }
      }
      return {{"field_map.json", dump({{"summary", summary},
                                       {"columns", {"x_m", "z_m", "Bx_T", "By_T", "Bz_T", "Bnorm_T"}},
                                       {"rows", rows}})}};
    }
    return {{"field_map.csv", csv.str()}, {"field_map_summary.json", dump(summary)}};
  }

  std::vector<Output> fit() {
    if (!cfg_.fit) throw ValidationError("config.fit is required");
    const auto params = resolved_circuit(cfg_);
    const double L1 = self_inductance(need_coil(cfg_.tx_coil, "tx_coil"));
    const double L2 = self_inductance(need_coil(cfg_.rx_coil, "rx_coil"));
    const auto& anchors = cfg_.fit->anchors;
    const bool have_anchors = anchors.p_load || anchors.efficiency;
    if (!have_anchors && anchors.points.empty()) {
      throw PreconditionError("fit needs p_load_w/efficiency anchors or measurements");
    }

    nlohmann::json j{{"frequency_hz", params.frequency}, {"L1_uH", L1 * 1e6}, {"L2_uH", L2 * 1e6}};
    if (have_anchors) {
      const auto f = fit_link_parameters(anchors, params, L1, L2);
      auto p = params;
      p.R1 = p.R2 = f.R_total / 2;
      const auto s = solve_phasor(p, CouplingLinkd{L1, L2, f.M, f.M / std::sqrt(L1 * L2)});
      j["link_fit"] = to_json(f);
      j["link_fit"]["k"] = f.M / std::sqrt(L1 * L2);
      j["link_fit"]["model_p_load_W"] = s.P_load;
      j["link_fit"]["model_efficiency"] = s.efficiency;
    }
    if (!anchors.points.empty()) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& e : per_gap_coupling_from_voltage(anchors, params, L1, L2)) rows.push_back(to_json(e));
      j["per_gap"] = rows;
    }
    return {{"fit.json", dump(j)}};
  }

  std::vector<Output> design() {
    if (!cfg_.design) throw ValidationError("config.design is required");
    const auto coil = design_coil_for_inductance(cfg_.design->constraints);
    nlohmann::json j{{"coil", to_json(coil)},
                     {"inductance_uH", self_inductance(coil) * 1e6},
                     {"target_uH", cfg_.design->constraints.target_inductance * 1e6},
                     {"fill_factor", fill_factor(coil)}};
    if (cfg_.design->f0) {
      const double f0 = *cfg_.design->f0;
      j["f0_hz"] = f0;
      j["resonant_capacitor_nF"] = resonant_capacitor(self_inductance(coil), f0) * 1e9;
      if (cfg_.tx_coil && cfg_.rx_coil) {
        const auto pair = design_resonant_pair(*cfg_.tx_coil, *cfg_.rx_coil, f0);
        j["resonant_pair"] = {{"C1_nF", pair.C1 * 1e9}, {"C2_nF", pair.C2 * 1e9}};
      }
    }
    return {{"design.json", dump(j)}};
  }

private:
  Options opt_;
  RunConfig cfg_;
};

void emit(const std::vector<Output>& outputs, const Options& opt, std::ostream& out) {
  if (opt.out_dir.empty()) {
    // Sidecar files only make sense with an output directory.
    out << outputs.front().contents;
    return;
  }
  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& o : outputs) write_file_atomically(dir / o.name, o.contents);
}

void error_line(std::ostream& err, const std::string& kind, const std::string& what) {
  std::string msg = what;
  for (auto& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "error: " << kind << ": " << msg << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonant inductive link toolkit for printed spiral coils", "wpt"};
  app.require_subcommand(1, 1);
  Options opt;
  app.add_option("--out-dir", opt.out_dir, "Write results into this directory instead of stdout");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", opt.quiet, "Suppress warnings");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"coil", "Self-inductance, fill factor, mean diameter and resistance of each coil"},
      {"couple", "Mutual inductance and coupling coefficient at the configured gap"},
      {"solve", "Phasor solution of the compensated link"},
      {"sweep-freq", "Frequency sweep of the link"},
      {"sweep-gap", "Gap sweep of the link"},
      {"field-map", "Biot-Savart flux density on an axial slice"},
      {"fit", "Fit coupling and ESR to measured anchors"},
      {"design", "Synthesize a coil for a target inductance"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", opt.config, "JSON configuration file")->required();
    sub->add_option("--gap-mm", opt.gap_mm, "Coil separation in mm");
    sub->add_option("--m-nh", opt.m_nh, "Override mutual inductance (nH)");
    sub->add_option("--freq-hz", opt.freq_hz, "Frequency for coil resistance");
    sub->add_option("--subdivisions", opt.subdivisions, "Filaments per turn")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", opt.out_dir, "Write results into this directory instead of stdout");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--quiet", opt.quiet, "Suppress warnings");
  }

  std::vector<const char*> argv{"wpt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(opt.config);
    if (!opt.quiet) {
      for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
    }
    Session session(opt, std::move(cfg));
    std::vector<Output> outputs;
    if (command == "coil") outputs = session.coil();
    else if (command == "couple") outputs = session.couple();
    else if (command == "solve") outputs = session.solve();
    else if (command == "sweep-freq") outputs = session.sweep_freq();
    else if (command == "sweep-gap") outputs = session.sweep_gap();
    else if (command == "field-map") outputs = session.field();
    else if (command == "fit") outputs = session.fit();
    else if (command == "design") outputs = session.design();
    emit(outputs, session.options(), out);
  } catch (const Error& e) {
    error_line(err, e.kind(), e.what());
    return kFailure;
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
    return kFailure;
  }
  return kOk;
}

}  // namespace wpt::cli
