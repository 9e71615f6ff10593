#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wpt/analysis.hpp"
#include "wpt/circuit.hpp"
#include "wpt/coil_model.hpp"
#include "wpt/design.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

struct CircuitConfig {
  CircuitParamsd params;
  bool r1_given{false};
  bool r2_given{false};
  std::optional<double> mutual;  // H, overrides the filament model when set
};

struct SweepConfig {
  double f_start{2e6};
  double f_stop{4e6};
  int points{201};
  Spacing spacing{Spacing::Linear};
  std::vector<double> gaps;  // m
};

struct FieldMapConfig {
  std::string coil{"tx"};
  double current{1.0};
  GridSpec<double> grid{0.0, 40e-3, 81, -20e-3, 20e-3, 81};
};

struct FitConfig {
  MeasurementSet anchors;
};

struct DesignConfig {
  DesignConstraints constraints;
  std::optional<double> f0;
};

/// One parsed configuration document. Sections are optional at parse time;
/// subcommands check for the ones they need.
struct RunConfig {
  std::optional<SpiralCoild> tx_coil;
  std::optional<SpiralCoild> rx_coil;
  std::optional<CircuitConfig> circuit;
  std::optional<SweepConfig> sweep;
  std::optional<FieldMapConfig> field_map;
  std::optional<FitConfig> fit;
  std::optional<DesignConfig> design;
  double gap{5e-3};
  int subdivisions{4};
  std::string out_dir;  // resolved against the config's directory
  std::string format;   // "csv", "json" or empty for the subcommand default
  std::vector<std::string> warnings;
};

/// Parses a coil object (`inner_diameter_mm`, `outer_diameter_mm`, `turns`,
/// `trace_width_mm`, `spacing_mm`, optional `trace_thickness_um` and
/// `resistivity_ohm_m`). Throws ValidationError naming every bad key.
SpiralCoild parse_coil(const nlohmann::json& j, const std::string& where = "coil");

/// `base_dir` resolves relative paths such as `fit.measurements_csv`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Reads `gap_mm,vrms_V` rows (header required).
std::vector<GapVoltage> read_measurements_csv(std::istream& in);

/// Circuit parameters with any missing coil ESR filled in from
/// series_resistance at the drive frequency.
CircuitParamsd resolved_circuit(const RunConfig& config);

}  // namespace wpt
