#include "wpt/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace wpt {
namespace {

SweepRow row_from(double value, const CircuitParamsd& p, const CouplingLinkd& link) {
  SweepRow row;
  row.value = value;
  try {
    const auto s = solve_phasor(p, link);
    row.vout_peak = std::abs(s.V_out);
    row.vout_rms = row.vout_peak / std::sqrt(2.0);
    row.efficiency = s.efficiency;
    row.p_load = s.P_load;
    row.p_in = s.P_in;
    row.ratio = p.source_peak() > 0 ? row.vout_peak / p.source_peak() : 0.0;
  } catch (const Error& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.vout_peak = row.vout_rms = row.efficiency = row.p_load = row.p_in = row.ratio = nan;
    row.flag = e.kind();
  }
  return row;
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double k) { return std::log(k / (1.0 - k)); }

constexpr double kLogRMin = -13.8;  // 1e-6 ohm
constexpr double kLogRMax = 9.2;    // ~1e4 ohm
constexpr double kLogitMax = 30.0;

Eigen::Vector2d clamp_box(Eigen::Vector2d x) {
  x(0) = std::clamp(x(0), -kLogitMax, kLogitMax);
  x(1) = std::clamp(x(1), kLogRMin, kLogRMax);
  return x;
}

class AnchorObjective {
public:
  AnchorObjective(const MeasurementSet& anchors, const CircuitParamsd& params, double L1, double L2)
      : anchors_(anchors), params_(params), L1_(L1), L2_(L2), m_max_(std::sqrt(L1 * L2)) {}

  double mutual(const Eigen::Vector2d& x) const { return sigmoid(x(0)) * m_max_; }
  double resistance(const Eigen::Vector2d& x) const { return std::exp(x(1)); }

  Eigen::VectorXd residuals(const Eigen::Vector2d& raw) const {
    const Eigen::Vector2d x = clamp_box(raw);
    CircuitParamsd p = params_;
    p.R1 = p.R2 = resistance(x) / 2;
    const auto s = solve_phasor(p, CouplingLinkd{L1_, L2_, mutual(x), sigmoid(x(0))});
    Eigen::VectorXd r(2);
    r(0) = (s.P_load - *anchors_.p_load) / *anchors_.p_load;
    r(1) = (s.efficiency - *anchors_.efficiency) / *anchors_.efficiency;
    return r;
  }

  double operator()(const Eigen::Vector2d& x) const { return residuals(x).squaredNorm(); }

private:
  const MeasurementSet& anchors_;
  CircuitParamsd params_;
  double L1_, L2_, m_max_;
};

struct Minimum {
  Eigen::Vector2d x;
  double value;
  int iterations;
};

template <typename F>
Minimum nelder_mead(const F& f, const Eigen::Vector2d& start, double scale, double ftol, int max_iter) {
  std::array<Eigen::Vector2d, 3> pts{start, start + Eigen::Vector2d(scale, 0), start + Eigen::Vector2d(0, scale)};
  std::array<double, 3> val{};
  for (int i = 0; i < 3; ++i) {
    pts[i] = clamp_box(pts[i]);
    val[i] = f(pts[i]);
  }
  int it = 0;
  for (; it < max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    if (val[worst] - val[best] <= ftol * (std::abs(val[best]) + 1e-300) && val[best] < ftol) break;
    if ((pts[worst] - pts[best]).norm() < 1e-14 && (pts[mid] - pts[best]).norm() < 1e-14) break;

    const Eigen::Vector2d centroid = (pts[best] + pts[mid]) / 2;
    const Eigen::Vector2d reflected = clamp_box(centroid + (centroid - pts[worst]));
    const double fr = f(reflected);
    if (fr < val[best]) {
      const Eigen::Vector2d expanded = clamp_box(centroid + 2 * (centroid - pts[worst]));
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded, val[worst] = fe;
      } else {
        pts[worst] = reflected, val[worst] = fr;
      }
    } else if (fr < val[mid]) {
      pts[worst] = reflected, val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const Eigen::Vector2d contracted =
          outside ? clamp_box(centroid + 0.5 * (reflected - centroid)) : clamp_box(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(contracted);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = contracted, val[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          pts[i] = clamp_box(pts[best] + 0.5 * (pts[i] - pts[best]));
          val[i] = f(pts[i]);
        }
      }
    }
  }
  const auto best = std::min_element(val.begin(), val.end()) - val.begin();
  return {pts[best], val[best], it};
}

/// Gauss-Newton steps with a central-difference Jacobian and step halving.
Minimum newton_polish(const AnchorObjective& f, Minimum m) {
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd r = f.residuals(m.x);
    Eigen::Matrix2d J;
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d h = Eigen::Vector2d::Zero();
      h(c) = 1e-6;
      J.col(c) = (f.residuals(m.x + h) - f.residuals(m.x - h)) / 2e-6;
    }
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
    if (!lu.isInvertible()) break;
    const Eigen::Vector2d step = lu.solve(-r);
    double t = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, t /= 2) {
      const Eigen::Vector2d trial = clamp_box(m.x + t * step);
      const double v = f(trial);
      if (v < m.value) {
        m.x = trial;
        m.value = v;
        improved = true;
        break;
      }
    }
    ++m.iterations;
    if (!improved || m.value < 1e-30) break;
  }
  return m;
}

}  // namespace

SweepTable frequency_sweep(const CircuitParamsd& params, const CouplingLinkd& link, double f_start,
                           double f_stop, int points, Spacing spacing) {
  if (!(f_start > 0) || !(f_stop > f_start)) throw DomainError("frequency sweep needs 0 < f_start < f_stop");
  if (points < 2) throw DomainError("frequency sweep needs at least two points");

  SweepTable table{"frequency", "Hz", {}};
  table.rows.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = double(i) / double(points - 1);
    double f = spacing == Spacing::Linear ? f_start + (f_stop - f_start) * t
                                          : f_start * std::pow(f_stop / f_start, t);
    if (i == points - 1) f = f_stop;
    table.rows.push_back(row_from(f, at_frequency(params, f), link));
  }
  return table;
}

SweepTable gap_sweep(const CircuitParamsd& params, const SpiralCoild& tx, const SpiralCoild& rx,
                     std::vector<double> gaps, int subdivisions) {
  if (gaps.empty()) throw DomainError("gap sweep needs at least one gap");
  for (double g : gaps) {
    if (!(g > 0)) throw DomainError("every gap must be positive");
  }
  std::sort(gaps.begin(), gaps.end());

  const double L1 = self_inductance(tx);
  const double L2 = self_inductance(rx);
  SweepTable table{"gap", "m", {}};
  table.rows.reserve(gaps.size());
  for (double g : gaps) {
    const double M = mutual_inductance_coils(tx, rx, g, subdivisions);
    const double k = M / std::sqrt(L1 * L2);
    if (!(k < 1)) {
      SweepRow row = row_from(g, params, CouplingLinkd{L1, L2, 0.0, 0.0});
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.vout_peak = row.vout_rms = row.efficiency = row.p_load = row.p_in = row.ratio = nan;
      row.flag = "unphysical-coupling";
      table.rows.push_back(row);
      continue;
    }
    table.rows.push_back(row_from(g, params, CouplingLinkd{L1, L2, M, k}));
  }
  return table;
}

std::optional<std::size_t> peak_row(const SweepTable& table) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i].ok()) continue;
    if (!best || table.rows[i].ratio > table.rows[*best].ratio) best = i;
  }
  return best;
}

void MeasurementSet::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].gap > 0)) throw PreconditionError("measurement gaps must be positive");
    if (!(points[i].vout_rms >= 0)) throw PreconditionError("measured voltages must be non-negative");
    if (i > 0 && !(points[i].gap > points[i - 1].gap)) {
      throw PreconditionError("measurement gaps must be strictly increasing");
    }
  }
  if (efficiency && !(*efficiency > 0 && *efficiency <= 1)) {
    throw PreconditionError("efficiency anchor must lie in (0, 1]");
  }
  if (p_load && !(*p_load > 0)) throw PreconditionError("load power anchor must be positive");
}

LinkFit fit_link_parameters(const MeasurementSet& anchors, const CircuitParamsd& params, double L1,
                            double L2, const FitOptions& options) {
  anchors.validate();
  if (!anchors.p_load || !anchors.efficiency) {
    throw PreconditionError("fitting M and R_total needs both the load-power and efficiency anchors");
  }
  detail::require_positive(L1, "L1");
  detail::require_positive(L2, "L2");
  validate(params);

  const AnchorObjective objective(anchors, params, L1, L2);
  const double ftol = options.tolerance * options.tolerance;

  Minimum best{Eigen::Vector2d::Zero(), std::numeric_limits<double>::infinity(), 0};
  std::vector<Minimum> roots;
  int total_iterations = 0;
  for (double k0 : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
    for (double r0 : {0.1, 1.0, 10.0, 100.0}) {
      const Eigen::Vector2d start(logit(k0), std::log(r0));
      Minimum m = nelder_mead(objective, start, 0.5, ftol * 1e-6, options.max_iterations);
      m = newton_polish(objective, m);
      total_iterations += m.iterations;
      if (m.value < best.value) best = m;
      if (m.value <= ftol) roots.push_back(m);
    }
  }
  std::optional<Minimum> alternative;
  if (!roots.empty()) {
    auto by_mutual = [&](const Minimum& a, const Minimum& b) {
      return objective.mutual(clamp_box(a.x)) < objective.mutual(clamp_box(b.x));
    };
    best = *std::max_element(roots.begin(), roots.end(), by_mutual);
    const double m_best = objective.mutual(clamp_box(best.x));
    for (const auto& r : roots) {
      const double m = objective.mutual(clamp_box(r.x));
      if (m < m_best * 0.99 && (!alternative || by_mutual(*alternative, r))) alternative = r;
    }
  }

  LinkFit fit;
  fit.M = objective.mutual(clamp_box(best.x));
  fit.R_total = objective.resistance(clamp_box(best.x));
  fit.residual = std::sqrt(best.value);
  fit.converged = fit.residual <= options.tolerance && fit.M > 0;
  fit.iterations = total_iterations;
  if (alternative) {
    fit.alternative_M = objective.mutual(clamp_box(alternative->x));
    fit.alternative_R_total = objective.resistance(clamp_box(alternative->x));
  }
  if (!fit.converged) {
    std::ostringstream msg;
    msg << "best residual " << fit.residual << " exceeds tolerance " << options.tolerance
        << " after " << total_iterations << " iterations";
    fit.diagnostics = msg.str();
  }
  return fit;
}

std::vector<CouplingEstimate> per_gap_coupling_from_voltage(const MeasurementSet& measurements,
                                                            const CircuitParamsd& params, double L1,
                                                            double L2) {
  measurements.validate();
  detail::require_positive(L1, "L1");
  detail::require_positive(L2, "L2");
  validate(params);

  const double m_max = std::sqrt(L1 * L2) * (1 - 1e-9);
  auto vout = [&](double M) { return std::abs(solve_phasor(params, CouplingLinkd{L1, L2, M, M / std::sqrt(L1 * L2)}).V_out); };

  constexpr int kScan = 400;
  std::vector<double> grid(kScan + 1), values(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    grid[i] = m_max * double(i) / kScan;
    values[i] = vout(grid[i]);
  }

  std::vector<CouplingEstimate> out;
  out.reserve(measurements.points.size());
  for (const auto& pt : measurements.points) {
    const double target = pt.vout_rms * std::sqrt(2.0);
    CouplingEstimate est{pt.gap, std::numeric_limits<double>::quiet_NaN(), false};
    if (target == 0) {
      est.M = 0;
      est.solved = true;
      out.push_back(est);
      continue;
    }
    for (int i = 0; i < kScan; ++i) {
      if ((values[i] - target) * (values[i + 1] - target) > 0) continue;
      double lo = grid[i], hi = grid[i + 1];
      const bool rising = values[i] < values[i + 1];
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((vout(mid) < target) == rising) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      est.M = 0.5 * (lo + hi);
      est.solved = true;
      break;
    }
    out.push_back(est);
  }
  return out;
}

}  // namespace wpt
