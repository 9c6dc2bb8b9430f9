#pragma once

// Quantum Fisher information of the reduced probe state with respect to the
// bath temperature or the probe-bath coupling.
//
// Three routes are provided:
//   qfi_eigen        eigen-decomposition of rho and the SLD sum (reference)
//   qfi_bloch        |dr|^2 + (r.dr)^2 / (1 - |r|^2), the qubit closed form
//   qfi_closed_form  the (Gamma, nz, phase) parametrisation, kept as a
//                    cross-check; it coincides with the others when nz = 0
// Derivatives of the dynamics are taken by central finite differences with
// one Richardson level, rebuilding the spectrum and the ensemble at x +- h.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "spinqfi/dynamics.hpp"
#include "spinqfi/model.hpp"

namespace spinqfi {

enum class Estimator { Temperature, Coupling };

inline std::string_view to_string(Estimator e) { return e == Estimator::Temperature ? "T" : "g"; }

inline Estimator parse_estimator(std::string_view s) {
  if (s == "T" || s == "Temperature" || s == "temperature") return Estimator::Temperature;
  if (s == "g" || s == "Coupling" || s == "coupling") return Estimator::Coupling;
  throw ParamError("unknown estimator '" + std::string(s) + "' (expected T|g)");
}

enum class QfiRoute { Eigen, Bloch, ClosedForm };

inline std::string_view to_string(QfiRoute r) {
  switch (r) {
    case QfiRoute::Eigen: return "eigen";
    case QfiRoute::Bloch: return "bloch";
    case QfiRoute::ClosedForm: return "closed_form";
  }
  return "?";
}

inline QfiRoute parse_route(std::string_view s) {
  if (s == "eigen") return QfiRoute::Eigen;
  if (s == "bloch") return QfiRoute::Bloch;
  if (s == "closed_form") return QfiRoute::ClosedForm;
  throw ParamError("unknown QFI route '" + std::string(s) + "'");
}

struct QfiRecord {
  double t = 0.0;
  Estimator estimator = Estimator::Temperature;
  double x = 0.0;
  double F = 0.0;
  PreparationMode mode = PreparationMode::PulseCorrelated;
  QfiRoute route = QfiRoute::Bloch;
  double deriv_step = 0.0;  // relative step h / max(|x|, scale floor)
  bool flagged = false;     // halving the step moved F by more than 1e-4 relative
};

inline double estimator_value(const ModelParams& p, Estimator e) { return e == Estimator::Temperature ? p.T : p.g; }

inline ModelParams with_estimator(ModelParams p, Estimator e, double x) {
  (e == Estimator::Temperature ? p.T : p.g) = x;
  return p;
}

inline constexpr double kQfiClip = 1e-9;

inline double clip_qfi(double F) {
  if (F >= 0.0) return F;
  if (F >= -kQfiClip) return 0.0;
  throw DomainError("negative quantum Fisher information " + std::to_string(F));
}

// ---------------------------------------------------------------------------
// Bloch route
// ---------------------------------------------------------------------------

inline double qfi_bloch(const BlochVector& r, const BlochVector& dr) {
  const double gap = 1.0 - r.norm2();
  const double rd = dot(r, dr);
  if (gap < 1e-12) {
    if (std::abs(rd) < 1e-9) return dr.norm2();
    throw DomainError("radial derivative of a pure state: QFI unbounded");
  }
  return clip_qfi(dr.norm2() + rd * rd / gap);
}

// ---------------------------------------------------------------------------
// Eigen route
// ---------------------------------------------------------------------------

struct QubitEigen {
  using cplx = std::complex<double>;
  std::array<double, 2> value{};               // descending
  std::array<std::array<cplx, 2>, 2> vector{};  // vector[n] in (up, down) components
};

/// Closed-form eigen-decomposition of a 2x2 Hermitian matrix.
inline QubitEigen qubit_eigen(const QubitDensity& rho) {
  using cplx = std::complex<double>;
  const double a = rho(0, 0).real(), d = rho(1, 1).real();
  const cplx b = rho(0, 1);
  const double mean = 0.5 * (a + d);
  const double hg = std::hypot(0.5 * (a - d), std::abs(b));
  QubitEigen out;
  out.value = {mean + hg, mean - hg};
  if (hg == 0.0) {
    out.vector[0] = {cplx(1.0), cplx(0.0)};
    out.vector[1] = {cplx(0.0), cplx(1.0)};
    return out;
  }
  // two candidate (unnormalised) vectors for the upper eigenvalue; take the
  // better-conditioned one
  const std::array<cplx, 2> c1{b, cplx(out.value[0] - a)};
  const std::array<cplx, 2> c2{cplx(out.value[0] - d), std::conj(b)};
  const double n1 = std::norm(c1[0]) + std::norm(c1[1]);
  const double n2 = std::norm(c2[0]) + std::norm(c2[1]);
  const auto& c = n1 >= n2 ? c1 : c2;
  const double nrm = std::sqrt(std::max(n1, n2));
  out.vector[0] = {c[0] / nrm, c[1] / nrm};
  out.vector[1] = {-std::conj(out.vector[0][1]), std::conj(out.vector[0][0])};
  return out;
}

namespace detail {

// <u| M |v>
inline std::complex<double> sandwich(const std::array<std::complex<double>, 2>& u, const QubitDensity& M,
                                     const std::array<std::complex<double>, 2>& v) {
  std::complex<double> s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += std::conj(u[static_cast<std::size_t>(i)]) * M(i, j) * v[static_cast<std::size_t>(j)];
  return s;
}

}  // namespace detail

/// F = sum_n (rho_n')^2 / rho_n + 2 sum_{n != m} (rho_n - rho_m)^2/(rho_n + rho_m) |<v_m|v_n'>|^2.
inline double qfi_eigen(const QubitDensity& rho, const QubitDensity& drho) {
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw ParamError("density matrix trace differs from 1");
  if (std::abs(drho.trace()) > 1e-10) throw ParamError("density derivative is not traceless");
  const auto eig = qubit_eigen(rho);
  if (eig.value[1] < -1e-12) throw ParamError("density matrix has a negative eigenvalue");

  double F = 0.0;
  for (std::size_t n = 0; n < 2; ++n) {
    const double lam = eig.value[n];
    const double dlam = detail::sandwich(eig.vector[n], drho, eig.vector[n]).real();
    if (lam < 1e-14) {
      if (std::abs(dlam) < 1e-12) continue;
      throw DomainError("vanishing eigenvalue with non-vanishing derivative: QFI unbounded");
    }
    F += dlam * dlam / lam;
  }

  const double gap = eig.value[0] - eig.value[1];
  const double sum = eig.value[0] + eig.value[1];
  for (std::size_t n = 0; n < 2; ++n) {
    const std::size_t m = 1 - n;
    const auto dmn = detail::sandwich(eig.vector[m], drho, eig.vector[n]);
    double term;
    if (std::abs(gap) < 1e-12) {
      term = std::norm(dmn) / sum;
    } else {
      const double ln_lm = eig.value[n] - eig.value[m];
      const double overlap2 = std::norm(dmn / ln_lm);  // |<v_m|v_n'>|^2
      term = ln_lm * ln_lm / sum * overlap2;
    }
    F += 2.0 * term;
  }
  return clip_qfi(F);
}

// ---------------------------------------------------------------------------
// (Gamma, nz, phase) route
// ---------------------------------------------------------------------------

/// F = (G' - nz nz' e^{2G})^2 / [f (e^{2G} - f)] + (nz' + nz G')^2 / f + (phase')^2 e^{-2G},
/// f = 1 + nz^2 e^{2G}.
inline double qfi_closed_form(double Gamma, double dGamma, double nz, double dnz, double dphase) {
  const double e2g = std::exp(2.0 * Gamma);
  const double f = 1.0 + nz * nz * e2g;
  if (!std::isfinite(e2g) || !(e2g > f)) throw DomainError("closed-form QFI outside its domain (e^{2 Gamma} <= f)");
  const double a = dGamma - nz * dnz * e2g;
  const double b = dnz + nz * dGamma;
  return a * a / (f * (e2g - f)) + b * b / f + dphase * dphase / e2g;
}

struct ClosedFormInputs {
  double Gamma = 0.0, dGamma = 0.0, nz = 0.0, dnz = 0.0, dphase = 0.0;
};

/// Gamma, phase and nz with their derivatives, from a Bloch vector and its derivative.
inline ClosedFormInputs closed_form_inputs(const BlochVector& r, const BlochVector& dr) {
  const double c2 = r.x * r.x + r.y * r.y;
  if (c2 < kCoherenceFloor) throw DomainError("coherence underflow: Gamma undefined");
  ClosedFormInputs in;
  in.Gamma = -0.5 * std::log(c2);
  in.dGamma = -(r.x * dr.x + r.y * dr.y) / c2;
  in.dphase = (r.x * dr.y - r.y * dr.x) / c2;
  in.nz = r.z;
  in.dnz = dr.z;
  return in;
}

inline double qfi_route(QfiRoute route, const BlochVector& r, const BlochVector& dr) {
  switch (route) {
    case QfiRoute::Bloch: return qfi_bloch(r, dr);
    case QfiRoute::Eigen: return qfi_eigen(QubitDensity::from_bloch(r), QubitDensity::from_bloch_derivative(dr));
    case QfiRoute::ClosedForm: {
      const auto in = closed_form_inputs(r, dr);
      return qfi_closed_form(in.Gamma, in.dGamma, in.nz, in.dnz, in.dphase);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Finite-difference sensitivity of the dynamics
// ---------------------------------------------------------------------------

struct DerivativeOptions {
  double rel_step = 1e-5;
  double scale_floor = 1e-3;  // h = rel_step * max(|x|, scale_floor)
};

struct BlochDerivative {
  BlochVector r{};
  BlochVector dr{};         // Richardson-extrapolated
  BlochVector dr_coarse{};  // central difference with step h
  BlochVector dr_fine{};    // central difference with step h/2
  double step = 0.0;        // absolute h
};

/// Prepared ensembles at x, x +- h, x +- h/2 for one (mode, estimator); the
/// derivative at any time is then cheap.
class SensitivityModel {
 public:
  SensitivityModel(const ModelParams& p, PreparationMode mode, Estimator which, DerivativeOptions opt = {})
      : mode_(mode), which_(which), x_(estimator_value(p, which)) {
    const double scale = std::max(std::abs(x_), opt.scale_floor);
    double h = opt.rel_step * scale;
    if (which == Estimator::Temperature) {
      while (x_ - h <= 0.0) {
        h *= 0.5;
        if (h < 1e-12) throw DomainError("finite-difference step shrunk below 1e-12 at T=" + std::to_string(x_));
      }
    }
    h_ = h;
    rel_step_ = h / scale;
    auto at = [&](double x) {
      auto q = validate_params(with_estimator(p, which, x));
      return prepare(q, mode);
    };
    center_ = at(x_);
    plus_ = at(x_ + h);
    minus_ = at(x_ - h);
    plus_half_ = at(x_ + 0.5 * h);
    minus_half_ = at(x_ - 0.5 * h);
  }

  [[nodiscard]] BlochDerivative at(double t) const {
    BlochDerivative d;
    d.step = h_;
    d.r = evolve_bloch(center_, t);
    d.dr_coarse = (evolve_bloch(plus_, t) - evolve_bloch(minus_, t)) / (2.0 * h_);
    d.dr_fine = (evolve_bloch(plus_half_, t) - evolve_bloch(minus_half_, t)) / h_;
    d.dr = (4.0 * d.dr_fine - d.dr_coarse) / 3.0;
    return d;
  }

  [[nodiscard]] QfiRecord qfi(double t, QfiRoute route = QfiRoute::Bloch) const {
    if (t < 0.0) throw ParamError("time must be >= 0");
    const auto d = at(t);
    QfiRecord rec;
    rec.t = t;
    rec.estimator = which_;
    rec.x = x_;
    rec.mode = mode_;
    rec.route = route;
    rec.deriv_step = rel_step_;
    rec.F = qfi_route(route, d.r, d.dr);
    const double Fc = qfi_bloch(d.r, d.dr_coarse);
    const double Ff = qfi_bloch(d.r, d.dr_fine);
    rec.flagged = std::abs(Fc - Ff) > 1e-4 * std::abs(Ff);
    return rec;
  }

  [[nodiscard]] const PreparedEnsemble& ensemble() const { return center_; }
  [[nodiscard]] double step() const { return h_; }
  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] PreparationMode mode() const { return mode_; }
  [[nodiscard]] Estimator estimator() const { return which_; }

 private:
  PreparationMode mode_;
  Estimator which_;
  double x_;
  double h_ = 0.0;
  double rel_step_ = 0.0;
  PreparedEnsemble center_, plus_, minus_, plus_half_, minus_half_;
};

inline BlochDerivative bloch_derivative(const ModelParams& p, PreparationMode mode, double t, Estimator which,
                                        DerivativeOptions opt = {}) {
  return SensitivityModel(p, mode, which, opt).at(t);
}

inline QfiRecord qfi_at(const ModelParams& p, PreparationMode mode, double t, Estimator which,
                        QfiRoute route = QfiRoute::Bloch, DerivativeOptions opt = {}) {
  return SensitivityModel(p, mode, which, opt).qfi(t, route);
}

}  // namespace spinqfi
