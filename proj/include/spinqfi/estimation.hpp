#pragma once

// Interaction-time optimisation of the QFI and parameter sweeps.
//
// F(t) is oscillatory, so the maximum is located by a uniform coarse scan
// followed by golden-section refinement inside the bracket around the best
// grid point. The refined value is never allowed to fall below the best
// coarse value.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "spinqfi/dynamics.hpp"
#include "spinqfi/qfi.hpp"

namespace spinqfi {

struct TimeWindow {
  double t_min = 0.0;
  double t_max = 20.0;
  int grid_points = 2001;
  double refine_tol = 1e-6;

  bool operator==(const TimeWindow&) const = default;
};

inline void validate_window(const TimeWindow& w) {
  if (!(w.t_min >= 0.0) || !(w.t_max > w.t_min)) throw ParamError("time window needs 0 <= t_min < t_max");
  if (w.grid_points < 2) throw ParamError("time window needs at least 2 grid points");
  if (!(w.refine_tol > 0.0)) throw ParamError("refine_tol must be > 0");
}

struct TimeOptimum {
  double t_star = 0.0;
  double F_star = 0.0;
  bool boundary_flag = false;
};

/// Golden-section search for a maximum of f on [a, b]; returns (t, f(t)).
template <class F>
std::pair<double, double> golden_section_maximize(F&& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Maximises an arbitrary F(t) over the window.
inline TimeOptimum maximize_over_time(const std::function<double(double)>& F, const TimeWindow& w) {
  validate_window(w);
  const int n = w.grid_points;
  const double dt = (w.t_max - w.t_min) / (n - 1);
  auto grid_t = [&](int i) { return i == n - 1 ? w.t_max : w.t_min + i * dt; };

  int best = -1;
  double best_F = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = F(grid_t(i));
    if (std::isnan(v)) throw DomainError("QFI is NaN at t=" + std::to_string(grid_t(i)));
    if (best < 0 || v > best_F) {
      best = i;
      best_F = v;
    }
  }

  TimeOptimum out{grid_t(best), best_F, best == n - 1};
  if (best_F == 0.0) return out;  // identically zero, t_star at the first grid point

  const double lo = grid_t(std::max(best - 1, 0));
  const double hi = grid_t(std::min(best + 1, n - 1));
  const auto [t_ref, F_ref] = golden_section_maximize(F, lo, hi, w.refine_tol);
  if (F_ref > out.F_star) {
    out.t_star = t_ref;
    out.F_star = F_ref;
  }
  return out;
}

/// Largest eigen-frequency eta_n = |(xi_n, delta)|/2 over the bath classes.
inline double max_precession_rate(const ModelParams& p) {
  const double gmax = std::abs(p.g) * p.N;
  return 0.5 * std::hypot(std::abs(p.eps) + gmax, p.delta);
}

/// Grid size with spacing below pi/(2 eta_max), so the coarse scan resolves
/// every oscillation of F(t).
inline int resolving_grid_points(const ModelParams& p, const TimeWindow& w) {
  const double eta = max_precession_rate(p);
  if (eta == 0.0) return w.grid_points;
  const double max_dt = std::numbers::pi / (2.0 * eta);
  const auto need = static_cast<int>(std::ceil((w.t_max - w.t_min) / max_dt)) + 2;
  return std::max(w.grid_points, need);
}

struct OptimumRecord {
  Estimator variable = Estimator::Temperature;
  double x_value = 0.0;
  PreparationMode mode = PreparationMode::PulseCorrelated;
  double t_star = 0.0;
  double F_star = 0.0;
  bool boundary_flag = false;
  std::string error;  // non-empty when the cell failed

  [[nodiscard]] bool ok() const { return error.empty(); }
};

inline OptimumRecord optimize_time(const ModelParams& p, PreparationMode mode, Estimator which,
                                   const TimeWindow& window = {}, DerivativeOptions opt = {}) {
  TimeWindow w = window;
  validate_window(w);
  w.grid_points = resolving_grid_points(p, w);
  const SensitivityModel model(p, mode, which, opt);
  const auto best = maximize_over_time([&](double t) { return model.qfi(t).F; }, w);
  OptimumRecord rec;
  rec.variable = which;
  rec.x_value = estimator_value(p, which);
  rec.mode = mode;
  rec.t_star = best.t_star;
  rec.F_star = best.F_star;
  rec.boundary_flag = best.boundary_flag;
  return rec;
}

struct SweepSpec {
  Estimator variable = Estimator::Temperature;
  std::vector<double> values;
  TimeWindow window;
  std::vector<PreparationMode> modes;

  bool operator==(const SweepSpec&) const = default;
};

inline void validate_sweep(const SweepSpec& s) {
  validate_window(s.window);
  if (s.values.empty()) throw ParamError("sweep needs at least one value");
  if (s.modes.empty()) throw ParamError("sweep needs at least one preparation mode");
  if (s.variable == Estimator::Temperature)
    for (double v : s.values)
      if (!(v > 0.0)) throw ParamError("temperature sweep values must be > 0");
}

/// One optimize_time per (value, mode), in input order. A failing cell is
/// recorded with its error and the sweep continues.
inline std::vector<OptimumRecord> sweep_parameter(const SweepSpec& spec, const ModelParams& p,
                                                  DerivativeOptions opt = {}) {
  validate_sweep(spec);
  std::vector<OptimumRecord> out;
  out.reserve(spec.values.size() * spec.modes.size());
  for (double x : spec.values) {
    for (auto mode : spec.modes) {
      try {
        const ModelParams q = validate_params(with_estimator(p, spec.variable, x));
        out.push_back(optimize_time(q, mode, spec.variable, spec.window, opt));
      } catch (const std::exception& e) {
        OptimumRecord rec;
        rec.variable = spec.variable;
        rec.x_value = x;
        rec.mode = mode;
        rec.F_star = std::numeric_limits<double>::quiet_NaN();
        rec.error = e.what();
        out.push_back(rec);
      }
    }
  }
  return out;
}

struct PreparationComparison {
  std::vector<OptimumRecord> records;  // kAllModes order
  double ratio_correlated = 0.0;       // F*(PulseCorrelated) / F*(ProjectiveCorrelated)
  double ratio_uncorrelated = 0.0;     // F*(PulseUncorrelated) / F*(ProjectiveUncorrelated)

  [[nodiscard]] const OptimumRecord& at(PreparationMode m) const {
    for (const auto& r : records)
      if (r.mode == m) return r;
    throw ParamError("mode missing from comparison");
  }
};

inline PreparationComparison compare_preparations(const ModelParams& p, Estimator which, double x_value,
                                                  const TimeWindow& window = {}, DerivativeOptions opt = {}) {
  SweepSpec spec;
  spec.variable = which;
  spec.values = {x_value};
  spec.window = window;
  spec.modes.assign(std::begin(kAllModes), std::end(kAllModes));
  PreparationComparison c;
  c.records = sweep_parameter(spec, p, opt);
  auto ratio = [&](PreparationMode a, PreparationMode b) { return c.at(a).F_star / c.at(b).F_star; };
  c.ratio_correlated = ratio(PreparationMode::PulseCorrelated, PreparationMode::ProjectiveCorrelated);
  c.ratio_uncorrelated = ratio(PreparationMode::PulseUncorrelated, PreparationMode::ProjectiveUncorrelated);
  return c;
}

}  // namespace spinqfi
