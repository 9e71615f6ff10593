#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpt/circuit.hpp"
#include "wpt/coil_model.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

struct SweepRow {
  double value{};
  double vout_peak{};
  double vout_rms{};
  double efficiency{};
  double p_load{};
  double p_in{};
  double ratio{};  // |V_out / V_in|
  std::string flag;  // empty when the row solved cleanly

  bool ok() const { return flag.empty(); }
};

struct SweepTable {
  std::string variable;
  std::string unit;
  std::vector<SweepRow> rows;
};

enum class Spacing { Linear, Log };

SweepTable frequency_sweep(const CircuitParamsd& params, const CouplingLinkd& link, double f_start,
                           double f_stop, int points, Spacing spacing = Spacing::Linear);

/// Rows in ascending gap order; M at each gap from the filament model,
/// L1 and L2 from the current-sheet formula.
SweepTable gap_sweep(const CircuitParamsd& params, const SpiralCoild& tx, const SpiralCoild& rx,
                     std::vector<double> gaps, int subdivisions = 4);

/// Index of the row with the largest transfer ratio among rows that solved.
std::optional<std::size_t> peak_row(const SweepTable& table);

struct GapVoltage {
  double gap;       // m
  double vout_rms;  // V
};

/// Measured rms output voltages against gap, plus optional scalar anchors
/// observed at the drive frequency.
struct MeasurementSet {
  std::vector<GapVoltage> points;
  std::optional<double> efficiency;
  std::optional<double> p_load;  // W

  /// Throws PreconditionError unless gaps are positive and strictly increasing,
  /// voltages are non-negative and the anchors are in range.
  void validate() const;
};

/// (M, R_total) with R1 = R2 = R_total / 2.
struct LinkFit {
  double M{};
  double R_total{};
  double residual{};  // Euclidean norm of the relative anchor residuals
  bool converged{};
  int iterations{};
  std::string diagnostics;
  // Two anchors usually admit a second exact root with far smaller M and a
  // milliohm-scale R_total. The larger-coupling root is returned; the other
  // is kept here when it was found.
  std::optional<double> alternative_M;
  std::optional<double> alternative_R_total;
};

struct FitOptions {
  double tolerance = 1e-9;
  int max_iterations = 4000;  // budget per start
};

/// Fits mutual inductance and total coil ESR so the forward model reproduces
/// the efficiency and load-power anchors at `params.frequency`. Uses bounded
/// multi-start Nelder-Mead, then a Newton polish. Among exact roots the one
/// with the largest M wins. Non-convergence is reported in the result, not
/// thrown.
LinkFit fit_link_parameters(const MeasurementSet& anchors, const CircuitParamsd& params, double L1,
                            double L2, const FitOptions& options = {});

struct CouplingEstimate {
  double gap{};
  double M{};
  bool solved{};
};

/// Inverts each rms voltage into the smallest M in [0, sqrt(L1 L2)) that
/// reproduces it, scanning for the first bracket and then bisecting.
std::vector<CouplingEstimate> per_gap_coupling_from_voltage(const MeasurementSet& measurements,
                                                            const CircuitParamsd& params, double L1,
                                                            double L2);

}  // namespace wpt
