#pragma once

// Bath eigenvalue classes. Every bath configuration |n> (spin string with
// s_i = +1 for up, -1 for down) is an eigenstate of the collective coupling,
// Zeeman and Ising operators with eigenvalues
//   G     = g * sum_i s_i
//   Omega = sum_i omega_i s_i
//   alpha = sum_bonds chi_b s_i s_{i+1}
// For uniform baths these depend only on the number of down spins k and the
// number of domain walls w, so the 2^N strings collapse to O(N^2) classes
// with exact integer multiplicities.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "spinqfi/model.hpp"

namespace spinqfi {

using Multiplicity = std::uint64_t;

struct SpectrumEntry {
  int k = 0;  // number of down spins
  int w = 0;  // number of domain walls, -1 when merged over w
  double G = 0.0;
  double Omega = 0.0;
  double alpha = 0.0;
  double log_mult = 0.0;
  Multiplicity mult = 1;
};

using Spectrum = std::vector<SpectrumEntry>;

inline constexpr int kMaxExactSpins = 20;
inline constexpr int kMaxCollapsedSpins = 62;

/// One entry per bit string; bit i set means spin i is down.
inline Spectrum enumerate_exact(const ModelParams& p) {
  if (p.N > kMaxExactSpins)
    throw ParamError("exact enumeration limited to N <= " + std::to_string(kMaxExactSpins) + ", got " +
                     std::to_string(p.N));
  const auto n = static_cast<std::size_t>(p.N);
  const std::size_t bonds = p.bond_count();
  const std::uint64_t count = std::uint64_t{1} << n;
  Spectrum out;
  out.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    auto s = [&](std::size_t i) { return ((bits >> (i % n)) & 1U) ? -1.0 : 1.0; };
    SpectrumEntry e;
    e.k = std::popcount(bits);
    double G = 0.0, Om = 0.0, al = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      G += s(i) * p.g;
      Om += s(i) * p.omega_at(i);
    }
    int walls = 0;
    for (std::size_t b = 0; b < bonds; ++b) {
      const double ss = s(b) * s(b + 1);
      al += p.chi_at(b) * ss;
      if (ss < 0) ++walls;
    }
    e.w = walls;
    e.G = G;
    e.Omega = Om;
    e.alpha = al;
    out.push_back(e);
  }
  return out;
}

/// Exact count M(k, w) of spin strings with k down spins and w domain walls,
/// by transfer over sites tracking (first spin, last spin, k, w). Returns a
/// (N+1) x (bonds+1) row-major table.
inline std::vector<Multiplicity> domain_wall_counts(int N, Boundary boundary) {
  const auto n = static_cast<std::size_t>(N);
  const std::size_t max_w = boundary == Boundary::Periodic ? n : n - 1;
  const std::size_t K = n + 1, W = max_w + 1;
  // dp[first][last][k][w]
  auto idx = [&](std::size_t f, std::size_t l, std::size_t k, std::size_t w) {
    return ((f * 2 + l) * K + k) * W + w;
  };
  std::vector<Multiplicity> dp(4 * K * W, 0), next(4 * K * W, 0);
  dp[idx(0, 0, 0, 0)] = 1;
  dp[idx(1, 1, 1, 0)] = 1;
  for (std::size_t site = 1; site < n; ++site) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t f = 0; f < 2; ++f)
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t k = 0; k <= site; ++k)
          for (std::size_t w = 0; w < W; ++w) {
            const Multiplicity c = dp[idx(f, l, k, w)];
            if (c == 0) continue;
            for (std::size_t s = 0; s < 2; ++s) {
              const std::size_t nw = w + (s != l ? 1 : 0);
              if (nw >= W) continue;
              next[idx(f, s, k + s, nw)] += c;
            }
          }
    dp.swap(next);
  }
  std::vector<Multiplicity> table(K * W, 0);
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t w = 0; w < W; ++w) {
          const Multiplicity c = dp[idx(f, l, k, w)];
          if (c == 0) continue;
          // closing bond between site N and site 1; for N = 1 it is a self-bond
          const std::size_t tw = (boundary == Boundary::Periodic && f != l) ? w + 1 : w;
          if (tw < W) table[k * W + tw] += c;
        }
  return table;
}

/// Collapsed spectrum for uniform omega and chi, sorted by (k, w). With
/// chi = 0 the w classes are merged into binomial classes.
inline Spectrum collapse_uniform(const ModelParams& p) {
  if (!p.uniform_omega() || !p.uniform_chi()) throw ParamError("collapse_uniform requires uniform omega and chi");
  if (p.N > kMaxCollapsedSpins)
    throw ParamError("collapsed spectrum limited to N <= " + std::to_string(kMaxCollapsedSpins));
  const int N = p.N;
  const double omega = p.omega.front();
  const double chi = p.chi.front();
  const int bonds = static_cast<int>(p.bond_count());
  const auto table = domain_wall_counts(N, p.boundary);
  const std::size_t W = static_cast<std::size_t>(bonds) + 1;

  Spectrum out;
  for (int k = 0; k <= N; ++k) {
    const double sum_s = N - 2 * k;
    if (chi == 0.0) {
      Multiplicity m = 0;
      for (std::size_t w = 0; w < W; ++w) m += table[static_cast<std::size_t>(k) * W + w];
      out.push_back({k, -1, p.g * sum_s, omega * sum_s, 0.0, std::log(static_cast<double>(m)), m});
      continue;
    }
    for (std::size_t w = 0; w < W; ++w) {
      const Multiplicity m = table[static_cast<std::size_t>(k) * W + w];
      if (m == 0) continue;
      const double alpha = chi * (bonds - 2 * static_cast<int>(w));
      out.push_back({k, static_cast<int>(w), p.g * sum_s, omega * sum_s, alpha, std::log(static_cast<double>(m)), m});
    }
  }
  return out;
}

/// Collapsed spectrum when the bath is uniform, exact enumeration otherwise.
inline Spectrum build_spectrum(const ModelParams& p) {
  if (p.uniform_omega() && p.uniform_chi()) return collapse_uniform(p);
  return enumerate_exact(p);
}

/// Sum of multiplicities (exact integer arithmetic).
inline Multiplicity total_multiplicity(const Spectrum& s) {
  Multiplicity t = 0;
  for (const auto& e : s) t += e.mult;
  return t;
}

/// Debug dump: k,w,G,Omega,alpha,multiplicity.
inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "k,w,G,Omega,alpha,multiplicity\n";
  char buf[160];
  for (const auto& e : s) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%llu\n", e.k, e.w, e.G, e.Omega, e.alpha,
                  static_cast<unsigned long long>(e.mult));
    os << buf;
  }
}

}  // namespace spinqfi
