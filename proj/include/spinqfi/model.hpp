#pragma once

// Probe/bath parameters and the two exact 2x2 primitives the rest of the
// library is built on: thermal exponentials of a qubit Hamiltonian
// (az/2) sz + (ax/2) sx, and Bloch-vector rotations generated by such a
// Hamiltonian.
//
// Units: hbar = k_B = 1, energies in units of the post-preparation level
// spacing, times in the inverse of that unit.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spinqfi {

/// Invalid or inconsistent input (bad parameters, malformed config).
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric-domain failure: unbounded QFI, underflowed norm, exhausted
/// finite-difference step, and similar.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Boundary { Periodic, Open };

/// Which trace factor the correlated pulse preparation uses.
/// `Prepared` is the Gibbs-consistent 2cosh(beta*eta0_n) built from the
/// pre-switch level spacing; `PostSwitch` uses 2cosh(beta*eta_n) built from
/// the post-switch spacing and is kept for comparison only (it can produce
/// unnormalised states).
enum class JcorrVariant { Prepared, PostSwitch };

inline std::string_view to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "open"; }

inline Boundary parse_boundary(std::string_view s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "open") return Boundary::Open;
  throw ParamError("unknown boundary '" + std::string(s) + "' (expected periodic|open)");
}

inline std::string_view to_string(JcorrVariant v) {
  return v == JcorrVariant::Prepared ? "prepared" : "post-switch";
}

inline JcorrVariant parse_jcorr(std::string_view s) {
  if (s == "prepared") return JcorrVariant::Prepared;
  if (s == "post-switch") return JcorrVariant::PostSwitch;
  throw ParamError("unknown jcorr variant '" + std::string(s) + "' (expected prepared|post-switch)");
}

/// Model parameters. `omega` and `chi` hold either a single uniform value or
/// one value per spin / per bond.
struct ModelParams {
  int N = 1;
  double eps0 = 4.0;   // probe level spacing before preparation
  double eps = 2.0;    // probe level spacing after preparation
  double delta = 1.0;  // tunnelling amplitude
  std::vector<double> omega{1.0};
  std::vector<double> chi{0.0};
  double g = 0.01;  // probe-bath coupling
  double T = 1.0;
  Boundary boundary = Boundary::Periodic;
  JcorrVariant jcorr = JcorrVariant::Prepared;

  [[nodiscard]] double beta() const { return 1.0 / T; }

  [[nodiscard]] std::size_t bond_count() const {
    return boundary == Boundary::Periodic ? static_cast<std::size_t>(N) : static_cast<std::size_t>(N - 1);
  }

  [[nodiscard]] double omega_at(std::size_t i) const { return omega.size() == 1 ? omega[0] : omega.at(i); }
  [[nodiscard]] double chi_at(std::size_t bond) const { return chi.size() == 1 ? chi[0] : chi.at(bond); }

  /// Per-spin level spacings, scalar broadcast to N entries.
  [[nodiscard]] std::vector<double> omega_list() const {
    std::vector<double> out(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = omega_at(i);
    return out;
  }

  /// Per-bond couplings, scalar broadcast to bond_count() entries.
  [[nodiscard]] std::vector<double> chi_list() const {
    std::vector<double> out(bond_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = chi_at(i);
    return out;
  }

  [[nodiscard]] bool uniform_omega() const {
    for (double w : omega)
      if (w != omega.front()) return false;
    return true;
  }
  [[nodiscard]] bool uniform_chi() const {
    for (double c : chi)
      if (c != chi.front()) return false;
    return true;
  }

  bool operator==(const ModelParams&) const = default;
};

/// Checks invariants and returns the normalised parameter set. Lists whose
/// entries are all equal are collapsed to a single uniform value.
inline ModelParams validate_params(ModelParams p) {
  if (p.N < 1) throw ParamError("N must be >= 1");
  if (!(p.T > 0.0)) throw ParamError("temperature T must be > 0");
  auto finite = [](double v) { return std::isfinite(v); };
  for (double v : {p.eps0, p.eps, p.delta, p.g, p.T})
    if (!finite(v)) throw ParamError("non-finite model parameter");
  if (p.omega.empty()) throw ParamError("omega must not be empty");
  if (p.chi.empty()) throw ParamError("chi must not be empty");
  if (p.omega.size() != 1 && p.omega.size() != static_cast<std::size_t>(p.N))
    throw ParamError("omega list has length " + std::to_string(p.omega.size()) + ", need 1 or N=" +
                     std::to_string(p.N));
  if (p.chi.size() != 1 && p.chi.size() != p.bond_count())
    throw ParamError("chi list has length " + std::to_string(p.chi.size()) + ", need 1 or " +
                     std::to_string(p.bond_count()) + " bonds for " + std::string(to_string(p.boundary)) +
                     " boundary");
  for (double v : p.omega)
    if (!finite(v)) throw ParamError("non-finite omega entry");
  for (double v : p.chi)
    if (!finite(v)) throw ParamError("non-finite chi entry");
  if (p.omega.size() > 1 && p.uniform_omega()) p.omega.resize(1);
  if (p.chi.size() > 1 && p.uniform_chi()) p.chi.resize(1);
  return p;
}

// ---------------------------------------------------------------------------
// Small vector / matrix types
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= 1.0 / s; }
  constexpr bool operator==(const Vec3&) const = default;

  [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
  [[nodiscard]] constexpr double norm2() const { return x * x + y * y + z * z; }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Bloch vector (<sx>, <sy>, <sz>) of a probe state.
using BlochVector = Vec3;

/// Row-major 3x3 real matrix.
struct Mat3 {
  std::array<double, 9> a{};

  [[nodiscard]] constexpr double operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  friend constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z, m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
  }
  friend constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out(i, j) += l(i, k) * r(k, j);
    return out;
  }
};

/// 2x2 density operator in the sz eigenbasis ordered (up, down).
struct QubitDensity {
  using cplx = std::complex<double>;
  std::array<cplx, 4> m{};  // row-major

  [[nodiscard]] const cplx& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
  cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

  /// rho = (I + r.sigma) / 2.
  static QubitDensity from_bloch(const BlochVector& r) {
    QubitDensity d;
    d(0, 0) = 0.5 * (1.0 + r.z);
    d(1, 1) = 0.5 * (1.0 - r.z);
    d(0, 1) = cplx(0.5 * r.x, -0.5 * r.y);
    d(1, 0) = cplx(0.5 * r.x, 0.5 * r.y);
    return d;
  }
  /// Derivative of a density operator: d rho = (dr.sigma) / 2, traceless.
  static QubitDensity from_bloch_derivative(const BlochVector& dr) {
    QubitDensity d;
    d(0, 0) = 0.5 * dr.z;
    d(1, 1) = -0.5 * dr.z;
    d(0, 1) = cplx(0.5 * dr.x, -0.5 * dr.y);
    d(1, 0) = cplx(0.5 * dr.x, 0.5 * dr.y);
    return d;
  }

  [[nodiscard]] BlochVector bloch() const {
    return {2.0 * (*this)(1, 0).real(), 2.0 * (*this)(1, 0).imag(), ((*this)(0, 0) - (*this)(1, 1)).real()};
  }
  [[nodiscard]] cplx trace() const { return (*this)(0, 0) + (*this)(1, 1); }
};

// ---------------------------------------------------------------------------
// Thermal exponential of a qubit Hamiltonian
// ---------------------------------------------------------------------------

/// J = Tr exp(-beta H) and b_k = Tr[exp(-beta H) sigma_k] for
/// H = (az/2) sz + (ax/2) sx.
struct QubitExpWeights {
  double J = 2.0;
  Vec3 b{};
};

/// The same quantities factored as exp(log_scale) * (J, b) so that large
/// beta*eta never overflows. log_scale = beta*eta.
struct ScaledExpWeights {
  double log_scale = 0.0;
  double J = 2.0;
  Vec3 b{};
};

namespace detail {

// sinh(beta*eta)/eta * exp(-beta*eta) = (1 - exp(-2 beta eta)) / (2 eta), with
// the eta -> 0 limit beta.
inline double scaled_sinhc(double beta, double eta) {
  const double x = 2.0 * beta * eta;
  if (x < 1e-8) return beta * (1.0 - beta * eta);
  return -std::expm1(-x) / (2.0 * eta);
}

}  // namespace detail

inline ScaledExpWeights qubit_exp_weights_scaled(double az, double ax, double beta) {
  const double eta = 0.5 * std::hypot(az, ax);
  const double be = beta * eta;
  ScaledExpWeights w;
  w.log_scale = be;
  w.J = 1.0 + std::exp(-2.0 * be);  // 2cosh(be) * exp(-be)
  const double s = detail::scaled_sinhc(beta, eta);
  w.b = Vec3{-s * ax, 0.0, -s * az};
  return w;
}

/// exp(-beta[(az/2) sz + (ax/2) sx]) = cosh(beta eta) I - sinh(beta eta)/eta H.
inline QubitExpWeights qubit_exp_weights(double az, double ax, double beta) {
  const auto s = qubit_exp_weights_scaled(az, ax, beta);
  const double f = std::exp(s.log_scale);
  return {s.J * f, s.b * f};
}

// ---------------------------------------------------------------------------
// Bloch rotation
// ---------------------------------------------------------------------------

/// Rotation of the Bloch vector generated by H = (xi/2) sz + (delta/2) sx over
/// time t: axis (delta, 0, xi)/(2 eta), angle 2 eta t, right-handed.
inline Mat3 rotation_matrix(double xi, double delta, double t) {
  const double two_eta = std::hypot(xi, delta);
  if (two_eta == 0.0) return Mat3::identity();
  const double mx = delta / two_eta, mz = xi / two_eta;
  const double phi = two_eta * t;
  const double c = std::cos(phi), s = std::sin(phi);
  // 1 - cos(phi) = 2 sin^2(phi/2) avoids cancellation at small angles
  const double sh = std::sin(0.5 * phi);
  const double omc = 2.0 * sh * sh;
  Mat3 R;
  R(0, 0) = c + omc * mx * mx;
  R(0, 1) = -s * mz;
  R(0, 2) = omc * mx * mz;
  R(1, 0) = s * mz;
  R(1, 1) = c;
  R(1, 2) = -s * mx;
  R(2, 0) = omc * mx * mz;
  R(2, 1) = s * mx;
  R(2, 2) = c + omc * mz * mz;
  return R;
}

/// r(t) = cos(phi) r0 + sin(phi) (m x r0) + (1 - cos(phi)) (m.r0) m.
inline BlochVector rodrigues_rotate(double xi, double delta, double t, const BlochVector& r0) {
  const double two_eta = std::hypot(xi, delta);
  if (two_eta == 0.0) return r0;
  const Vec3 m{delta / two_eta, 0.0, xi / two_eta};
  const double phi = two_eta * t;
  const double sh = std::sin(0.5 * phi);
  return std::cos(phi) * r0 + std::sin(phi) * cross(m, r0) + (2.0 * sh * sh * dot(m, r0)) * m;
}

}  // namespace spinqfi
