#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"

#include "wpt/analysis.hpp"
#include "wpt/circuit.hpp"
#include "wpt/coil_model.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

/// 9 significant digits; non-finite values print as NaN.
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const SweepTable& table);
nlohmann::json to_json(const SweepTable& table);

/// Header `x_m,z_m,Bx_T,By_T,Bz_T,Bnorm_T`; dropped points carry NaN.
void write_field_csv(std::ostream& out, const FieldGrid<double>& grid);
nlohmann::json field_summary(const FieldGrid<double>& grid);

nlohmann::json to_json(const SpiralCoild& coil);
nlohmann::json coil_report(const SpiralCoild& coil, double frequency);
nlohmann::json to_json(const PhasorSolutiond& solution);
nlohmann::json to_json(const LinkFit& fit);
nlohmann::json to_json(const CouplingEstimate& estimate);

/// Writes to `path.tmp` and renames over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace wpt
