#pragma once

// Prepared probe+bath ensembles and the exact reduced probe dynamics.
//
// Every bath class n is an eigenspace of all bath operators, so both the
// initial Gibbs state and the evolution are block-diagonal in n. Within a
// class the probe carries an unnormalised 2x2 operator (J_n I + b0_n.sigma)/2
// with Boltzmann weight m_n c_n, c_n = exp(-beta (Omega_n/2 + alpha_n)), and
// evolves under H_n = (xi_n/2) sz + (delta/2) sx with xi_n = G_n + eps. The
// reduced Bloch vector is
//   r(t) = sum_n m_n c_n R_n(t) b0_n / sum_n m_n c_n J_n.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "spinqfi/model.hpp"
#include "spinqfi/numeric.hpp"
#include "spinqfi/spectrum.hpp"

namespace spinqfi {

enum class PreparationMode { PulseCorrelated, PulseUncorrelated, ProjectiveCorrelated, ProjectiveUncorrelated };

inline constexpr PreparationMode kAllModes[] = {PreparationMode::PulseCorrelated, PreparationMode::PulseUncorrelated,
                                                PreparationMode::ProjectiveCorrelated,
                                                PreparationMode::ProjectiveUncorrelated};

inline std::string_view to_string(PreparationMode m) {
  switch (m) {
    case PreparationMode::PulseCorrelated: return "PulseCorrelated";
    case PreparationMode::PulseUncorrelated: return "PulseUncorrelated";
    case PreparationMode::ProjectiveCorrelated: return "ProjectiveCorrelated";
    case PreparationMode::ProjectiveUncorrelated: return "ProjectiveUncorrelated";
  }
  return "?";
}

inline PreparationMode parse_mode(std::string_view s) {
  for (auto m : kAllModes)
    if (to_string(m) == s) return m;
  throw ParamError("unknown preparation mode '" + std::string(s) + "'");
}

inline bool is_correlated(PreparationMode m) {
  return m == PreparationMode::PulseCorrelated || m == PreparationMode::ProjectiveCorrelated;
}
inline bool is_pulse(PreparationMode m) {
  return m == PreparationMode::PulseCorrelated || m == PreparationMode::PulseUncorrelated;
}

/// Action of the preparation pulse exp(i pi/4 sy) on a Bloch vector:
/// a -pi/2 rotation about y, (x, y, z) -> (-z, y, x).
constexpr Vec3 pulse_rotate(const Vec3& v) { return {-v.z, v.y, v.x}; }

struct EnsembleEntry {
  double log_weight = 0.0;  // ln(m_n c_n)
  double log_scale = 0.0;   // true (J, b0) = exp(log_scale) * (J, b0)
  double J = 1.0;
  Vec3 b0{};
  double xi = 0.0;
};

struct PreparedEnsemble {
  std::vector<EnsembleEntry> entries;
  PreparationMode mode = PreparationMode::PulseCorrelated;
  ModelParams params;
  // normalised per-entry factor exp(log_weight + log_scale - shift) / Z
  std::vector<double> factors;
  double log_norm = 0.0;  // ln sum_n exp(log_weight + log_scale) J

  /// Normalised t = 0 Bloch vector.
  [[nodiscard]] BlochVector initial_bloch() const {
    CompensatedVec3 acc;
    for (std::size_t i = 0; i < entries.size(); ++i) acc.add(factors[i] * entries[i].b0);
    return acc.value();
  }
};

namespace detail {

// <+x| exp(-beta H) |+x> * exp(-beta eta) for H = (a/2) sz + (d/2) sx.
inline double scaled_plus_x_overlap(double a, double d, double beta) {
  const double two_eta = std::hypot(a, d);
  if (two_eta == 0.0) return 1.0;
  const double e2 = std::exp(-beta * two_eta);
  // 1 - d/(2 eta), without cancellation when d ~ 2 eta
  const double one_minus = d >= 0.0 ? (a * a) / (two_eta * (two_eta + d)) : 1.0 - d / two_eta;
  const double one_plus = 1.0 + d / two_eta;
  return 0.5 * (one_minus + e2 * one_plus);
}

inline void finalize(PreparedEnsemble& e) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& x : e.entries) shift = std::max(shift, x.log_weight + x.log_scale);
  e.factors.resize(e.entries.size());
  CompensatedSum z;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    const auto& x = e.entries[i];
    e.factors[i] = std::exp(x.log_weight + x.log_scale - shift);
    z.add(e.factors[i] * x.J);
  }
  const double Z = z.value();
  if (!(Z > 0.0) || !std::isfinite(Z)) throw DomainError("prepared ensemble has non-positive normalisation");
  for (double& f : e.factors) f /= Z;
  e.log_norm = shift + std::log(Z);
}

}  // namespace detail

/// Builds the per-class initial probe operators for one preparation mode.
inline PreparedEnsemble prepare(const ModelParams& p, const Spectrum& spectrum, PreparationMode mode) {
  PreparedEnsemble e;
  e.mode = mode;
  e.params = p;
  e.entries.reserve(spectrum.size());
  const double beta = p.beta();

  const auto uncorrelated_pulse = qubit_exp_weights_scaled(p.eps0, p.delta, beta);

  for (const auto& s : spectrum) {
    EnsembleEntry x;
    x.log_weight = s.log_mult - beta * (0.5 * s.Omega + s.alpha);
    x.xi = s.G + p.eps;
    switch (mode) {
      case PreparationMode::PulseCorrelated: {
        const double a = p.eps0 + s.G;
        const auto w = qubit_exp_weights_scaled(a, p.delta, beta);
        x.log_scale = w.log_scale;
        x.b0 = pulse_rotate(w.b);
        if (p.jcorr == JcorrVariant::Prepared) {
          x.J = w.J;
        } else {
          const double eta_n = 0.5 * std::hypot(x.xi, p.delta);
          x.J = std::exp(beta * eta_n - w.log_scale) + std::exp(-beta * eta_n - w.log_scale);
        }
        break;
      }
      case PreparationMode::PulseUncorrelated:
        x.log_scale = uncorrelated_pulse.log_scale;
        x.J = uncorrelated_pulse.J;
        x.b0 = pulse_rotate(uncorrelated_pulse.b);
        break;
      case PreparationMode::ProjectiveCorrelated: {
        const double a = p.eps0 + s.G;
        x.log_scale = 0.5 * beta * std::hypot(a, p.delta);
        x.J = detail::scaled_plus_x_overlap(a, p.delta, beta);
        x.b0 = Vec3{x.J, 0.0, 0.0};
        break;
      }
      case PreparationMode::ProjectiveUncorrelated:
        x.log_scale = 0.0;
        x.J = 1.0;
        x.b0 = Vec3{1.0, 0.0, 0.0};
        break;
    }
    e.entries.push_back(x);
  }
  detail::finalize(e);
  return e;
}

inline PreparedEnsemble prepare(const ModelParams& p, PreparationMode mode) {
  return prepare(p, build_spectrum(p), mode);
}

struct DynamicsPoint {
  double t = 0.0;
  BlochVector r{};
  double Gamma = 0.0;  // -ln(nx^2 + ny^2)/2, +inf when coherence underflows
  double phase = 0.0;  // atan2(ny, nx)
  double nz = 0.0;
  bool coherence_underflow = false;
};

inline constexpr double kCoherenceFloor = 1e-300;

inline DynamicsPoint make_dynamics_point(double t, const BlochVector& r) {
  DynamicsPoint d;
  d.t = t;
  d.r = r;
  d.nz = r.z;
  d.phase = std::atan2(r.y, r.x);
  const double c2 = r.x * r.x + r.y * r.y;
  if (c2 < kCoherenceFloor) {
    d.Gamma = std::numeric_limits<double>::infinity();
    d.coherence_underflow = true;
  } else {
    d.Gamma = -0.5 * std::log(c2);
  }
  return d;
}

/// Reduced Bloch vector at time t.
inline BlochVector evolve_bloch(const PreparedEnsemble& e, double t) {
  const double delta = e.params.delta;
  CompensatedVec3 acc;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    const auto& x = e.entries[i];
    acc.add(e.factors[i] * rodrigues_rotate(x.xi, delta, t, x.b0));
  }
  return acc.value();
}

inline DynamicsPoint reduced_bloch(const PreparedEnsemble& e, double t) {
  if (t < 0.0) throw ParamError("time must be >= 0");
  return make_dynamics_point(t, evolve_bloch(e, t));
}

// ---------------------------------------------------------------------------
// Closed-form propagator route
// ---------------------------------------------------------------------------

/// Class-averaged rotation matrices under the two weightings: m_n c_n / Z_B
/// (uncorrelated) and J_n m_n c_n / Z~ (correlated). Column 0 holds the
/// Theta_{ix} propagators.
struct PropagatorSet {
  Mat3 uncorrelated;
  Mat3 correlated;
};

/// With `corrected` false, Theta_xx is evaluated with eta_n^2 in place of
/// xi_n^2 in front of the cosine (the uncorrected form); it then fails to
/// equal 1 at t = 0.
inline PropagatorSet closed_propagators(const ModelParams& p, const Spectrum& spectrum, double t,
                                       bool corrected = true) {
  const double beta = p.beta();
  std::vector<double> lw_u, lw_c;
  lw_u.reserve(spectrum.size());
  lw_c.reserve(spectrum.size());
  for (const auto& s : spectrum) {
    const double lw = s.log_mult - beta * (0.5 * s.Omega + s.alpha);
    const double eta = p.jcorr == JcorrVariant::Prepared ? 0.5 * std::hypot(p.eps0 + s.G, p.delta)
                                                         : 0.5 * std::hypot(s.G + p.eps, p.delta);
    // ln(2 cosh(beta eta))
    const double ln_j = beta * eta + std::log1p(std::exp(-2.0 * beta * eta));
    lw_u.push_back(lw);
    lw_c.push_back(lw + ln_j);
  }
  const double lz_u = log_sum_exp(lw_u);
  const double lz_c = log_sum_exp(lw_c);

  std::array<CompensatedSum, 9> acc_u, acc_c;
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    const double xi = spectrum[n].G + p.eps;
    Mat3 R = rotation_matrix(xi, p.delta, t);
    if (!corrected) {
      const double eta2 = 0.25 * (xi * xi + p.delta * p.delta);
      R(0, 0) = eta2 > 0.0 ? (p.delta * p.delta + eta2 * std::cos(2.0 * std::sqrt(eta2) * t)) / (4.0 * eta2) : 1.0;
    }
    const double wu = std::exp(lw_u[n] - lz_u);
    const double wc = std::exp(lw_c[n] - lz_c);
    for (std::size_t k = 0; k < 9; ++k) {
      acc_u[k].add(wu * R.a[k]);
      acc_c[k].add(wc * R.a[k]);
    }
  }
  PropagatorSet out;
  for (std::size_t k = 0; k < 9; ++k) {
    out.uncorrelated.a[k] = acc_u[k].value();
    out.correlated.a[k] = acc_c[k].value();
  }
  return out;
}

}  // namespace spinqfi
