#include "wpt/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wpt/error.hpp"

namespace wpt {
namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json complex_json(std::complex<double> z) {
  return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}, {"arg_deg", std::arg(z) * 180.0 / pi<double>}};
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "var,unit,vout_peak_V,vout_rms_V,efficiency,p_load_W,p_in_W,ratio\n";
  for (const auto& r : table.rows) {
    out << format_number(r.value) << ',' << table.unit << ',' << format_number(r.vout_peak) << ','
        << format_number(r.vout_rms) << ',' << format_number(r.efficiency) << ',' << format_number(r.p_load)
        << ',' << format_number(r.p_in) << ',' << format_number(r.ratio) << '\n';
  }
}

nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row{{"value", r.value},
                       {"vout_peak_V", number_or_null(r.vout_peak)},
                       {"vout_rms_V", number_or_null(r.vout_rms)},
                       {"efficiency", number_or_null(r.efficiency)},
                       {"p_load_W", number_or_null(r.p_load)},
                       {"p_in_W", number_or_null(r.p_in)},
                       {"ratio", number_or_null(r.ratio)}};
    if (!r.ok()) row["flag"] = r.flag;
    rows.push_back(std::move(row));
  }
  return {{"variable", table.variable}, {"unit", table.unit}, {"rows", std::move(rows)}};
}

void write_field_csv(std::ostream& out, const FieldGrid<double>& grid) {
  out << "x_m,z_m,Bx_T,By_T,Bz_T,Bnorm_T\n";
  for (const auto& s : grid.samples) {
    out << format_number(s.x) << ',' << format_number(s.z) << ',' << format_number(s.B.x()) << ','
        << format_number(s.B.y()) << ',' << format_number(s.B.z()) << ','
        << format_number(s.valid ? s.B.norm() : std::nan("")) << '\n';
  }
}

nlohmann::json field_summary(const FieldGrid<double>& grid) {
  double peak = 0;
  for (const auto& s : grid.samples) {
    if (s.valid) peak = std::max(peak, s.B.norm());
  }
  return {{"nx", grid.nx},
          {"nz", grid.nz},
          {"points", grid.samples.size()},
          {"dropped_singular", grid.dropped},
          {"peak_Bnorm_T", peak},
          {"peak_Hnorm_A_per_m", peak / mu0<double>}};
}

nlohmann::json to_json(const SpiralCoild& coil) {
  return {{"inner_diameter_mm", coil.inner_diameter * 1e3},
          {"outer_diameter_mm", coil.outer_diameter * 1e3},
          {"turns", coil.turns},
          {"trace_width_mm", coil.trace_width * 1e3},
          {"spacing_mm", coil.turn_spacing * 1e3},
          {"trace_thickness_um", coil.trace_thickness * 1e6},
          {"resistivity_ohm_m", coil.resistivity}};
}

nlohmann::json coil_report(const SpiralCoild& coil, double frequency) {
  return {{"geometry", to_json(coil)},
          {"fill_factor", fill_factor(coil)},
          {"average_diameter_mm", average_diameter(coil) * 1e3},
          {"inductance_uH", self_inductance(coil) * 1e6},
          {"conductor_length_m", conductor_length(coil)},
          {"resistance_dc_ohm", series_resistance(coil, 0.0)},
          {"frequency_hz", frequency},
          {"resistance_ohm", series_resistance(coil, frequency)},
          {"geometrically_consistent", is_geometrically_consistent(coil)}};
}

nlohmann::json to_json(const PhasorSolutiond& s) {
  return {{"I1_A", complex_json(s.I1)},
          {"I2_A", complex_json(s.I2)},
          {"I_source_A", complex_json(s.I_source)},
          {"V_out_V", complex_json(s.V_out)},
          {"vout_rms_V", std::abs(s.V_out) / std::sqrt(2.0)},
          {"p_in_W", s.P_in},
          {"p_load_W", s.P_load},
          {"p_loss_W", s.P_loss},
          {"efficiency", s.efficiency}};
}

nlohmann::json to_json(const LinkFit& fit) {
  nlohmann::json j{{"M_nH", fit.M * 1e9},
                   {"R_total_ohm", fit.R_total},
                   {"R1_ohm", fit.R_total / 2},
                   {"R2_ohm", fit.R_total / 2},
                   {"residual", fit.residual},
                   {"converged", fit.converged},
                   {"iterations", fit.iterations}};
  if (!fit.diagnostics.empty()) j["diagnostics"] = fit.diagnostics;
  if (fit.alternative_M) {
    j["alternative"] = {{"M_nH", *fit.alternative_M * 1e9}, {"R_total_ohm", *fit.alternative_R_total}};
  }
  return j;
}

nlohmann::json to_json(const CouplingEstimate& e) {
  return {{"gap_mm", e.gap * 1e3}, {"M_nH", number_or_null(e.M * 1e9)}, {"solved", e.solved}};
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ValidationError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wpt
