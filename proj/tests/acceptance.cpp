// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion 5   run one criterion (exit 0 on pass)

#include <algorithm>
#include <cfenv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinqfi/config.hpp"
#include "spinqfi/dynamics.hpp"
#include "spinqfi/estimation.hpp"
#include "spinqfi/oracle.hpp"
#include "spinqfi/qfi.hpp"
#include "spinqfi/spectrum.hpp"

using namespace spinqfi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ModelParams fig1_params(double g = 0.01, double T = 1.0) {
  ModelParams p = figure_params();
  p.g = g;
  p.T = T;
  return validate_params(p);
}

const PreparationMode PC = PreparationMode::PulseCorrelated;
const PreparationMode PU = PreparationMode::PulseUncorrelated;
const PreparationMode QC = PreparationMode::ProjectiveCorrelated;
const PreparationMode QU = PreparationMode::ProjectiveUncorrelated;

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

double optimum(const ModelParams& p, PreparationMode m, Estimator which, double x, const TimeWindow& w = {}) {
  const auto rec = optimize_time(validate_params(with_estimator(p, which, x)), m, which, w);
  return rec.F_star;
}

// -------------------------------------------------------------------------

Outcome oracle_dynamics() {
  const double tol = 1e-9, budget = 60.0;
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string where;
  for (int N : {2, 4, 6, 8})
    for (double g : {0.01, 0.5, 1.0})
      for (double T : {0.5, 1.0, 2.0})
        for (double chi : {0.0, 0.1}) {
          ModelParams p = fig1_params(g, T);
          p.N = N;
          p.chi = {chi};
          p = validate_params(p);
          const auto spectrum = build_spectrum(p);
          const oracle::Propagator prop(p);
          const auto states = oracle::prepare_total_states(p);
          for (std::size_t m = 0; m < 4; ++m) {
            const auto e = prepare(p, spectrum, kAllModes[m]);
            const oracle::Trajectory traj(prop, states[m]);
            for (int i = 0; i <= 100; ++i) {
              const double t = 0.1 * i;
              const double dev = (evolve_bloch(e, t) - traj.reduced_state(t).bloch()).norm();
              if (dev > worst) {
                worst = dev;
                where = fmt("N=%d g=%g T=%g chi=%g %s t=%g", N, g, T, chi, std::string(to_string(kAllModes[m])).c_str(), t);
              }
            }
          }
        }
  const double secs = seconds_since(t0);
  return {worst <= tol && secs < budget,
          fmt("sup |r - r_oracle| = %.3g (tol %g, at %s); %.1f s (budget %g s)", worst, tol, where.c_str(), secs, budget)};
}

Outcome oracle_qfi_check() {
  const double tol = 1e-6, budget = 30.0;
  const auto t0 = Clock::now();
  ModelParams p = fig1_params(0.5, 0.8);
  p.N = 6;
  p.chi = {0.1};
  p = validate_params(p);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> td(0.1, 10.0);
  std::uniform_int_distribution<int> md(0, 3), ed(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto mode = kAllModes[md(rng)];
    const auto which = ed(rng) ? Estimator::Coupling : Estimator::Temperature;
    const double t = td(rng);
    const double F = qfi_at(p, mode, t, which).F;
    const double Fo = oracle::oracle_qfi(p, mode, t, which);
    worst = std::max(worst, std::abs(F - Fo) / std::abs(Fo));
  }
  const double secs = seconds_since(t0);
  return {worst <= tol && secs < budget,
          fmt("max relative error %.3g over 20 points (tol %g); %.1f s (budget %g s)", worst, tol, secs, budget)};
}

Outcome spectrum_collapse() {
  const double tol = 1e-12, budget = 5.0;
  const auto t0 = Clock::now();
  ModelParams p = fig1_params(0.3, 1.0);
  p.N = 12;
  p.chi = {0.1};
  p = validate_params(p);
  const auto exact = enumerate_exact(p);
  const auto coll = collapse_uniform(p);
  double worst = 0.0;
  for (double beta : {0.2, 1.0, 3.0})
    for (double a : {0.0, 0.7, -1.3}) {
      auto f = [&](const SpectrumEntry& e) {
        return std::exp(-beta * (0.5 * e.Omega + e.alpha)) * std::cos(a * e.G + 0.3 * e.alpha);
      };
      CompensatedSum se, sc;
      for (const auto& e : exact) se.add(f(e));
      for (const auto& e : coll) sc.add(static_cast<double>(e.mult) * f(e));
      worst = std::max(worst, std::abs(se.value() - sc.value()) / std::abs(se.value()));
    }
  const auto total = total_multiplicity(coll);
  const double secs = seconds_since(t0);
  return {worst <= tol && total == 4096 && secs < budget,
          fmt("max relative deviation %.3g (tol %g); multiplicity total %llu (need 4096); %.2f s", worst, tol,
              static_cast<unsigned long long>(total), secs)};
}

Outcome scale_check() {
  const double budget = 10.0;
  const auto cfg = builtin_preset("fig1");
  const auto& q = std::get<QfiTimeCommand>(cfg.command);
  double slowest = 0.0;
  bool finite = true;
  for (double T : q.values) {
    const auto t0 = Clock::now();
    const auto p = validate_params(with_estimator(cfg.params, Estimator::Temperature, T));
    for (auto mode : q.modes) {
      const SensitivityModel m(p, mode, Estimator::Temperature);
      for (int i = 0; i < q.grid.points; ++i) finite = finite && std::isfinite(m.qfi(q.grid.at(i)).F);
    }
    slowest = std::max(slowest, seconds_since(t0));
  }

  // low-temperature stress: no overflow or invalid operation anywhere
  std::feclearexcept(FE_ALL_EXCEPT);
  const auto cold = validate_params(with_estimator(cfg.params, Estimator::Temperature, 0.2));
  bool cold_finite = true;
  for (auto mode : kAllModes) {
    const SensitivityModel m(cold, mode, Estimator::Temperature);
    for (int i = 0; i < q.grid.points; ++i) cold_finite = cold_finite && std::isfinite(m.qfi(q.grid.at(i)).F);
  }
  const bool overflow = std::fetestexcept(FE_OVERFLOW) != 0;
  const bool invalid = std::fetestexcept(FE_INVALID) != 0;
  const bool pass = slowest < budget && finite && cold_finite && !overflow && !invalid;
  return {pass, fmt("slowest 2001-point trace (2 modes) %.2f s (budget %g s); T=0.2: finite=%d overflow=%d invalid=%d",
                    slowest, budget, cold_finite, overflow, invalid)};
}

Outcome fig1_trend() {
  const auto cfg = builtin_preset("fig1");
  const auto& q = std::get<QfiTimeCommand>(cfg.command);
  bool decreasing = true;
  std::string stars;
  for (auto mode : {PC, PU}) {
    std::vector<double> F;
    for (double T : q.values) F.push_back(optimum(cfg.params, mode, Estimator::Temperature, T));
    for (std::size_t i = 1; i < F.size(); ++i) decreasing = decreasing && F[i] < F[i - 1];
    stars += fmt("%s F*=[%.4g %.4g %.4g] ", std::string(to_string(mode)).c_str(), F[0], F[1], F[2]);
  }
  // uniform agreement of the traces: sup_t |Fc - Fu| / sup_t Fu
  const double tol = 0.01;
  double worst = 0.0;
  for (double T : q.values) {
    const auto p = validate_params(with_estimator(cfg.params, Estimator::Temperature, T));
    const SensitivityModel c(p, PC, Estimator::Temperature), u(p, PU, Estimator::Temperature);
    double diff = 0.0, peak = 0.0;
    for (int i = 0; i < q.grid.points; ++i) {
      const double t = q.grid.at(i);
      const double Fc = c.qfi(t).F, Fu = u.qfi(t).F;
      diff = std::max(diff, std::abs(Fc - Fu));
      peak = std::max(peak, Fu);
    }
    worst = std::max(worst, diff / peak);
  }
  return {decreasing && worst <= tol,
          fmt("%sstrictly decreasing=%d; correlated vs uncorrelated sup|dF|/supF = %.4g (tol %g)", stars.c_str(),
              decreasing, worst, tol)};
}

Outcome fig2_overlap() {
  const double tol = 0.02;
  const auto p = fig1_params(0.01);
  double worst = 0.0;
  std::string where;
  for (int i = 2; i <= 15; ++i) {
    const double T = i / 5.0;
    for (auto [a, b] : {std::pair{PC, QC}, std::pair{PU, QU}}) {
      const double Fa = optimum(p, a, Estimator::Temperature, T);
      const double Fb = optimum(p, b, Estimator::Temperature, T);
      const double d = rel_diff(Fa, Fb);
      if (d > worst) {
        worst = d;
        where = fmt("T=%g %s %.4g vs %s %.4g", T, std::string(to_string(a)).c_str(), Fa,
                    std::string(to_string(b)).c_str(), Fb);
      }
    }
  }
  return {worst <= tol, fmt("max pulse/projective relative gap %.4g (tol %g) at %s", worst, tol, where.c_str())};
}

Outcome fig3_ordering() {
  const double tol = 0.05;
  const auto p = fig1_params(1.0);
  bool ordered = true;
  double worst = 0.0;
  std::string detail;
  for (double T : {2.0, 3.0}) {
    const double pu = optimum(p, PU, Estimator::Temperature, T), qu = optimum(p, QU, Estimator::Temperature, T);
    const double pc = optimum(p, PC, Estimator::Temperature, T), qc = optimum(p, QC, Estimator::Temperature, T);
    ordered = ordered && pu > qu;
    worst = std::max(worst, rel_diff(pc, qc));
    detail += fmt("T=%g: uncorr pulse %.4g vs proj %.4g, corr pulse %.4g vs proj %.4g; ", T, pu, qu, pc, qc);
  }
  return {ordered && worst <= tol,
          detail + fmt("uncorrelated ordering=%d, correlated gap %.4g (tol %g)", ordered, worst, tol)};
}

Outcome fig6_ordering() {
  const auto cfg = builtin_preset("fig6");
  const auto& q = std::get<QfiTimeCommand>(cfg.command);
  int wins_c = 0, wins_u = 0;
  const SensitivityModel pc(cfg.params, PC, Estimator::Coupling), qc(cfg.params, QC, Estimator::Coupling);
  const SensitivityModel pu(cfg.params, PU, Estimator::Coupling), qu(cfg.params, QU, Estimator::Coupling);
  for (int i = q.grid.points - 10; i < q.grid.points; ++i) {
    const double t = q.grid.at(i);
    wins_c += pc.qfi(t).F > qc.qfi(t).F;
    wins_u += pu.qfi(t).F > qu.qfi(t).F;
  }
  const double t_last = q.grid.at(q.grid.points - 1);
  return {wins_c == 10 && wins_u == 10,
          fmt("F_pulse > F_proj at %d/10 (correlated) and %d/10 (uncorrelated) largest times; at t=%g: corr %.5g vs %.5g, "
              "uncorr %.5g vs %.5g",
              wins_c, wins_u, t_last, pc.qfi(t_last).F, qc.qfi(t_last).F, pu.qfi(t_last).F, qu.qfi(t_last).F)};
}

Outcome fig5_growth() {
  const auto cfg = builtin_preset("fig5");
  bool increasing = true;
  std::string detail;
  for (auto mode : kAllModes) {
    const SensitivityModel m(cfg.params, mode, Estimator::Coupling);
    auto F = [&](double t) { return m.qfi(t).F; };
    std::vector<double> running;
    double best = 0.0;
    for (int k = 0; k < 5; ++k) {
      TimeWindow w;
      w.t_min = 2.0 * k;
      w.t_max = 2.0 * (k + 1);
      w.grid_points = 401;
      best = std::max(best, maximize_over_time(F, w).F_star);
      running.push_back(best);
    }
    for (std::size_t k = 1; k < running.size(); ++k) increasing = increasing && running[k] > running[k - 1];
    detail += fmt("%s [%.4g %.4g %.4g %.4g %.4g] ", std::string(to_string(mode)).c_str(), running[0], running[1],
                  running[2], running[3], running[4]);
  }
  return {increasing, "running max over [0,2k]: " + detail + fmt("strictly increasing=%d", increasing)};
}

Outcome route_equivalence() {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Vec3 r{n(rng), n(rng), n(rng)};
    r = r * (0.999 * std::cbrt(u(rng)) / r.norm());
    const Vec3 dr{n(rng), n(rng), n(rng)};
    const double Fb = qfi_route(QfiRoute::Bloch, r, dr), Fe = qfi_route(QfiRoute::Eigen, r, dr);
    worst = std::max(worst, std::abs(Fb - Fe) / std::max(Fe, 1e-300));
  }
  // closed form at nz = 0, from pure-dephasing dynamics
  double worst_cf = 0.0;
  ModelParams p = fig1_params(0.3, 1.0);
  p.delta = 0.0;
  p.N = 20;
  p = validate_params(p);
  for (auto which : {Estimator::Temperature, Estimator::Coupling})
    for (auto mode : {QC, QU})
      for (double t : {0.3, 1.0, 2.5, 4.0}) {
        const auto d = bloch_derivative(p, mode, t, which);
        if (std::abs(d.r.z) >= 1e-10 || std::abs(d.dr.z) >= 1e-10) continue;
        const double Fc = qfi_route(QfiRoute::ClosedForm, d.r, d.dr), Fe = qfi_route(QfiRoute::Eigen, d.r, d.dr);
        worst_cf = std::max(worst_cf, std::abs(Fc - Fe) / Fe);
      }
  // nz != 0: reported only
  double dev_nz = 0.0;
  const auto q = fig1_params(0.5, 1.0);
  for (double t : {0.5, 1.5, 3.0}) {
    const auto d = bloch_derivative(q, PC, t, Estimator::Temperature);
    const double Fc = qfi_route(QfiRoute::ClosedForm, d.r, d.dr), Fe = qfi_route(QfiRoute::Eigen, d.r, d.dr);
    dev_nz = std::max(dev_nz, std::abs(Fc - Fe) / Fe);
  }
  return {worst <= 1e-10 && worst_cf <= 1e-8,
          fmt("bloch vs eigen %.3g (tol 1e-10); closed form at nz=0 %.3g (tol 1e-8); nz!=0 deviation %.3g (reported)",
              worst, worst_cf, dev_nz)};
}

Outcome limits() {
  // weak-coupling degeneracy in F_star
  const auto weak = fig1_params(1e-4);
  double worst = 0.0;
  for (double T : {0.5, 1.0, 2.0})
    for (auto [a, b] : {std::pair{PC, PU}, std::pair{QC, QU}})
      worst = std::max(worst, rel_diff(optimum(weak, a, Estimator::Temperature, T),
                                       optimum(weak, b, Estimator::Temperature, T)));
  // hot limit
  double hot = 0.0;
  const auto hp = fig1_params(0.01, 1e4);
  for (auto m : kAllModes) hot = std::max(hot, qfi_at(hp, m, 2.0, Estimator::Temperature).F);
  // pure dephasing
  ModelParams dp = fig1_params(0.3, 1.0);
  dp.delta = 0.0;
  double drift = 0.0;
  for (auto m : kAllModes) {
    const auto e = prepare(dp, m);
    const double nz0 = evolve_bloch(e, 0.0).z;
    for (int i = 0; i <= 200; ++i) drift = std::max(drift, std::abs(evolve_bloch(e, 0.1 * i).z - nz0));
  }
  return {worst <= 0.005 && hot < 1e-6 && drift <= 1e-12,
          fmt("g=1e-4 corr/uncorr F* gap %.3g (tol 0.005); T=1e4 F(t=2) %.3g (< 1e-6); delta=0 nz drift %.3g (tol 1e-12)",
              worst, hot, drift)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "oracle equivalence (dynamics)", oracle_dynamics},
      {2, "oracle equivalence (QFI)", oracle_qfi_check},
      {3, "spectrum collapse", spectrum_collapse},
      {4, "scale and low-temperature stability", scale_check},
      {5, "temperature trend, weak coupling", fig1_trend},
      {6, "pulse/projective overlap, weak coupling", fig2_overlap},
      {7, "pulse/projective ordering, strong coupling", fig3_ordering},
      {8, "pulse beats projective for coupling estimation", fig6_ordering},
      {9, "coupling information grows with time", fig5_growth},
      {10, "QFI route equivalence", route_equivalence},
      {11, "limit checks", limits},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria().size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }

  int failed = 0;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] AC%-2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
