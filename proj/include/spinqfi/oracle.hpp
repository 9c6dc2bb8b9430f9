#pragma once

// Dense reference simulation of the full probe + N-spin Hilbert space.
//
// Nothing here uses the class structure of the bath: Hamiltonians are
// assembled from Kronecker products, every matrix function goes through a
// dense Hermitian eigendecomposition, and the probe state is obtained by a
// partial trace. Basis order: probe (x) bath spin 1 (x) ... (x) bath spin N,
// each factor ordered (up, down); the probe is the most significant bit.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spinqfi/dynamics.hpp"
#include "spinqfi/model.hpp"
#include "spinqfi/qfi.hpp"

namespace spinqfi::oracle {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

inline constexpr int kMaxOracleSpins = 8;

enum class HamiltonianPhase { Before, After };

inline Eigen::Matrix2cd pauli_x() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2cd pauli_y() { return (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished(); }
inline Eigen::Matrix2cd pauli_z() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// `op` acting on `site` of an n-site register (site 0 most significant).
inline DenseOperator embed(const Eigen::Matrix2cd& op, int site, int nsites) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (int s = 0; s < nsites; ++s) {
    const DenseOperator f = s == site ? DenseOperator(op) : DenseOperator(DenseOperator::Identity(2, 2));
    out = kron(out, f);
  }
  return out;
}

/// f(H) for Hermitian H via eigendecomposition.
template <class F>
DenseOperator hermitian_function(const DenseOperator& H, F&& f) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
  if (es.info() != Eigen::Success) throw DomainError("dense eigendecomposition failed");
  const Eigen::VectorXd& E = es.eigenvalues();
  Eigen::VectorXcd fe(E.size());
  for (Eigen::Index i = 0; i < E.size(); ++i) fe(i) = f(E(i), E);
  return es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(-beta H) / Tr exp(-beta H).
inline DenseOperator gibbs_state(const DenseOperator& H, double beta) {
  DenseOperator rho =
      hermitian_function(H, [beta](double e, const Eigen::VectorXd& all) { return cplx(std::exp(-beta * (e - all.minCoeff()))); });
  return rho / rho.trace();
}

/// Bath-only Hamiltonian on N spins.
inline DenseOperator build_bath_hamiltonian(const ModelParams& p) {
  if (p.N > kMaxOracleSpins) throw ParamError("oracle limited to N <= " + std::to_string(kMaxOracleSpins));
  const int n = p.N;
  const auto dim = Eigen::Index{1} << n;
  DenseOperator H = DenseOperator::Zero(dim, dim);
  for (int i = 0; i < n; ++i) H += 0.5 * p.omega_at(static_cast<std::size_t>(i)) * embed(pauli_z(), i, n);
  for (std::size_t b = 0; b < p.bond_count(); ++b) {
    const int i = static_cast<int>(b), j = static_cast<int>((b + 1) % static_cast<std::size_t>(n));
    H += p.chi_at(b) * embed(pauli_z(), i, n) * embed(pauli_z(), j, n);
  }
  return H;
}

/// Probe-only Hamiltonian (eps/2) sz + (delta/2) sx for the given phase.
inline DenseOperator build_probe_hamiltonian(const ModelParams& p, HamiltonianPhase phase) {
  const double e = phase == HamiltonianPhase::Before ? p.eps0 : p.eps;
  return 0.5 * e * pauli_z() + 0.5 * p.delta * pauli_x();
}

inline DenseOperator build_total_hamiltonian(const ModelParams& p, HamiltonianPhase phase) {
  if (p.N > kMaxOracleSpins) throw ParamError("oracle limited to N <= " + std::to_string(kMaxOracleSpins));
  const int n = p.N + 1;
  const auto bath_dim = Eigen::Index{1} << p.N;
  DenseOperator H = kron(build_probe_hamiltonian(p, phase), DenseOperator::Identity(bath_dim, bath_dim));
  H += kron(DenseOperator::Identity(2, 2), build_bath_hamiltonian(p));
  DenseOperator coupling = DenseOperator::Zero(H.rows(), H.cols());
  for (int i = 1; i < n; ++i) coupling += embed(pauli_z(), i, n);
  H += 0.5 * p.g * embed(pauli_z(), 0, n) * coupling;
  return H;
}

/// (A (x) I) rho (B (x) I) for 2x2 A, B acting on the probe, evaluated block by block.
inline DenseOperator apply_probe(const Eigen::Matrix2cd& A, const DenseOperator& rho, const Eigen::Matrix2cd& B) {
  const Eigen::Index h = rho.rows() / 2;
  DenseOperator out = DenseOperator::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const cplx c = A(i, k) * B(l, j);
          if (c != 0.0) out.block(i * h, j * h, h, h) += c * rho.block(k * h, l * h, h, h);
        }
  return out;
}

/// exp(i pi/4 sy), computed as a matrix exponential.
inline Eigen::Matrix2cd pulse_operator() {
  const DenseOperator R =
      hermitian_function(pauli_y(), [](double e, const Eigen::VectorXd&) { return std::exp(cplx(0.0, 0.25 * std::numbers::pi * e)); });
  return R;
}

/// |+x><+x|.
inline Eigen::Matrix2cd plus_x_projector() { return 0.5 * (Eigen::Matrix2cd::Identity() + pauli_x()); }

inline DenseOperator prepare_total_state(const ModelParams& p, PreparationMode mode) {
  const double beta = p.beta();
  const Eigen::Matrix2cd R = pulse_operator();
  const Eigen::Matrix2cd P = plus_x_projector();

  if (is_correlated(mode)) {
    const DenseOperator rho = gibbs_state(build_total_hamiltonian(p, HamiltonianPhase::Before), beta);
    if (is_pulse(mode)) return apply_probe(R, rho, R.adjoint());
    DenseOperator proj = apply_probe(P, rho, P);
    const double tr = proj.trace().real();
    if (!(tr > 1e-300)) throw DomainError("projection onto +x has vanishing probability");
    return proj / tr;
  }
  const DenseOperator rho_bath = gibbs_state(build_bath_hamiltonian(p), beta);
  DenseOperator rho_probe;
  if (is_pulse(mode)) {
    rho_probe = R * gibbs_state(build_probe_hamiltonian(p, HamiltonianPhase::Before), beta) * R.adjoint();
  } else {
    rho_probe = P;
  }
  return kron(rho_probe, rho_bath);
}

/// Initial states for all four modes, in kAllModes order, sharing one Gibbs
/// state between the correlated preparations.
inline std::array<DenseOperator, 4> prepare_total_states(const ModelParams& p) {
  const double beta = p.beta();
  const Eigen::Matrix2cd R = pulse_operator();
  const Eigen::Matrix2cd P = plus_x_projector();
  const DenseOperator gibbs = gibbs_state(build_total_hamiltonian(p, HamiltonianPhase::Before), beta);
  std::array<DenseOperator, 4> out;
  out[0] = apply_probe(R, gibbs, R.adjoint());
  out[1] = prepare_total_state(p, PreparationMode::PulseUncorrelated);
  DenseOperator proj = apply_probe(P, gibbs, P);
  const double tr = proj.trace().real();
  if (!(tr > 1e-300)) throw DomainError("projection onto +x has vanishing probability");
  out[2] = proj / tr;
  out[3] = prepare_total_state(p, PreparationMode::ProjectiveUncorrelated);
  return out;
}

/// Tr_B of a probe (x) bath operator.
inline QubitDensity partial_trace_bath(const DenseOperator& rho) {
  const Eigen::Index half = rho.rows() / 2;
  QubitDensity out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = rho.block(i * half, j * half, half, half).trace();
  return out;
}

/// Eigendecomposition of H_after, reused for any number of initial states.
class Propagator {
 public:
  explicit Propagator(const ModelParams& p) {
    const DenseOperator H = build_total_hamiltonian(p, HamiltonianPhase::After);
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
    if (es.info() != Eigen::Success) throw DomainError("dense eigendecomposition failed");
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
    const Eigen::Index half = H.rows() / 2;
    // reduced element rho_ij = Tr[rho (|j><i| (x) I)]; in the energy basis
    // W^dagger (|j><i| (x) I) W = (row block j of W)^dagger (row block i of W)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        probe_ops_[static_cast<std::size_t>(2 * i + j)] =
            basis_.middleRows(j * half, half).adjoint() * basis_.middleRows(i * half, half);
  }

  [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
  [[nodiscard]] const DenseOperator& basis() const { return basis_; }
  [[nodiscard]] const DenseOperator& probe_op(int i, int j) const { return probe_ops_[static_cast<std::size_t>(2 * i + j)]; }

 private:
  Eigen::VectorXd energies_;
  DenseOperator basis_;
  std::array<DenseOperator, 4> probe_ops_;
};

/// Evolution of one initial state; the reduced state at any t costs O(dim^2).
class Trajectory {
 public:
  Trajectory(const Propagator& prop, const DenseOperator& rho0) : prop_(&prop) {
    rho_energy_ = prop.basis().adjoint() * rho0 * prop.basis();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        // elementwise rho~_ab * O~_ba
        weights_[static_cast<std::size_t>(2 * i + j)] = rho_energy_.cwiseProduct(prop.probe_op(i, j).transpose());
  }

  [[nodiscard]] QubitDensity reduced_state(double t) const {
    const auto& E = prop_->energies();
    Eigen::VectorXcd u(E.size());
    for (Eigen::Index a = 0; a < E.size(); ++a) u(a) = std::exp(cplx(0.0, -E(a) * t));
    QubitDensity out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const auto& W = weights_[static_cast<std::size_t>(2 * i + j)];
        out(i, j) = u.transpose() * W * u.conjugate();
      }
    return out;
  }

  /// Full state U(t) rho0 U(t)^dagger.
  [[nodiscard]] DenseOperator total_state(double t) const {
    const auto& E = prop_->energies();
    DenseOperator r = rho_energy_;
    for (Eigen::Index a = 0; a < r.rows(); ++a)
      for (Eigen::Index b = 0; b < r.cols(); ++b) r(a, b) *= std::exp(cplx(0.0, -(E(a) - E(b)) * t));
    return prop_->basis() * r * prop_->basis().adjoint();
  }

 private:
  const Propagator* prop_;
  DenseOperator rho_energy_;
  std::array<DenseOperator, 4> weights_;
};

inline QubitDensity oracle_reduced_state(const DenseOperator& rho0, const ModelParams& p, double t) {
  const Propagator prop(p);
  return Trajectory(prop, rho0).reduced_state(t);
}

/// Eighth-order central difference of the dense reduced state over x, then the
/// eigen route.
inline double oracle_qfi(const ModelParams& p, PreparationMode mode, double t, Estimator which) {
  static constexpr std::array<double, 4> coeff{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const double x = estimator_value(p, which);
  double h = 2e-3 * std::max(std::abs(x), 0.05);
  if (which == Estimator::Temperature)
    while (x - 4.0 * h <= 0.0) h *= 0.5;

  auto state_at = [&](double xv) {
    const ModelParams q = validate_params(with_estimator(p, which, xv));
    const Propagator prop(q);
    return Trajectory(prop, prepare_total_state(q, mode)).reduced_state(t);
  };

  const QubitDensity rho = state_at(x);
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    const double off = static_cast<double>(k + 1) * h;
    const QubitDensity up = state_at(x + off), dn = state_at(x - off);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d(i, j) += coeff[k] * (up(i, j) - dn(i, j)) / h;
  }
  d = 0.5 * (d + d.adjoint()).eval();
  QubitDensity drho;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) drho(i, j) = d(i, j);
  return qfi_eigen(rho, drho);
}

}  // namespace spinqfi::oracle
