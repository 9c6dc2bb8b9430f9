#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "spinqfi/spectrum.hpp"

using namespace spinqfi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams uniform(int N, double g, double omega, double chi, Boundary b = Boundary::Periodic) {
  ModelParams p;
  p.N = N;
  p.g = g;
  p.omega = {omega};
  p.chi = {chi};
  p.boundary = b;
  return validate_params(p);
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// (k, w) histogram of the exact enumeration
std::map<std::pair<int, int>, std::uint64_t> histogram(const Spectrum& s) {
  std::map<std::pair<int, int>, std::uint64_t> h;
  for (const auto& e : s) h[{e.k, e.w}] += e.mult;
  return h;
}

}  // namespace

TEST_CASE("single spin", "[spectrum]") {
  const auto s = enumerate_exact(uniform(1, 0.5, 1.0, 0.0));
  REQUIRE(s.size() == 2);
  REQUIRE(s[0].G == 0.5);
  REQUIRE(s[0].Omega == 1.0);
  REQUIRE(s[1].G == -0.5);
  REQUIRE(s[1].Omega == -1.0);
  for (const auto& e : s) {
    REQUIRE(e.mult == 1);
    REQUIRE(e.log_mult == 0.0);
  }
}

TEST_CASE("two-spin ring has two bonds between the pair", "[spectrum]") {
  const auto s = enumerate_exact(uniform(2, 1.0, 1.0, 0.3));
  std::map<std::tuple<double, double, double>, int> counts;
  for (const auto& e : s) counts[{e.G, e.Omega, std::round(e.alpha * 1e12) / 1e12}] += 1;
  REQUIRE(counts.size() == 3);
  REQUIRE(counts[{2.0, 2.0, 0.6}] == 1);
  REQUIRE(counts[{0.0, 0.0, -0.6}] == 2);
  REQUIRE(counts[{-2.0, -2.0, 0.6}] == 1);
}

TEST_CASE("domain-wall counts for four spins", "[spectrum]") {
  const auto s = collapse_uniform(uniform(4, 1.0, 1.0, 0.1));
  std::uint64_t m22 = 0, m24 = 0, k2 = 0;
  for (const auto& e : s) {
    if (e.k != 2) continue;
    k2 += e.mult;
    if (e.w == 2) m22 = e.mult;
    if (e.w == 4) m24 = e.mult;
  }
  REQUIRE(m22 == 4);
  REQUIRE(m24 == 2);
  REQUIRE(k2 == 6);
}

TEST_CASE("ring count matches run combinatorics", "[spectrum]") {
  // w = 2b walls for b blocks of down spins: M = (N/b) C(k-1, b-1) C(N-k-1, b-1)
  const int N = 14;
  const auto table = domain_wall_counts(N, Boundary::Periodic);
  const std::size_t W = static_cast<std::size_t>(N) + 1;
  for (int k = 1; k < N; ++k)
    for (int b = 1; 2 * b <= N && b <= std::min(k, N - k); ++b) {
      const std::uint64_t expect =
          static_cast<std::uint64_t>(N) * binomial(k - 1, b - 1) * binomial(N - k - 1, b - 1) / static_cast<std::uint64_t>(b);
      REQUIRE(table[static_cast<std::size_t>(k) * W + static_cast<std::size_t>(2 * b)] == expect);
    }
  REQUIRE(table[0] == 1);
  REQUIRE(table[static_cast<std::size_t>(N) * W] == 1);
}

TEST_CASE("chi = 0 merges into binomial classes", "[spectrum]") {
  const auto s = collapse_uniform(uniform(50, 0.01, 1.0, 0.0));
  REQUIRE(s.size() == 51);
  REQUIRE(s[25].k == 25);
  REQUIRE(s[25].mult == binomial(50, 25));
  REQUIRE(s[25].mult == 126410606437752ULL);
  REQUIRE_THAT(s[25].log_mult, WithinRel(std::log(126410606437752.0), 1e-15));
  for (const auto& e : s) {
    REQUIRE(e.w == -1);
    REQUIRE_THAT(e.G, WithinAbs(0.01 * (50 - 2 * e.k), 1e-15));
    REQUIRE(e.Omega == 50.0 - 2.0 * e.k);
  }
}

TEST_CASE("collapsed and exact spectra agree as multisets", "[spectrum]") {
  for (auto boundary : {Boundary::Periodic, Boundary::Open}) {
    for (int N : {1, 2, 3, 8, 12}) {
      const auto p = uniform(N, 0.3, 1.2, 0.1, boundary);
      const auto exact = histogram(enumerate_exact(p));
      const auto collapsed = histogram(collapse_uniform(p));
      INFO("N=" << N << " boundary=" << to_string(boundary));
      REQUIRE(exact == collapsed);
    }
  }
}

TEST_CASE("multiplicities sum to 2^N", "[spectrum][property]") {
  for (int N = 1; N <= kMaxCollapsedSpins; N += (N < 16 ? 1 : 7)) {
    for (auto boundary : {Boundary::Periodic, Boundary::Open}) {
      const auto s = collapse_uniform(uniform(N, 0.1, 1.0, 0.2, boundary));
      REQUIRE(total_multiplicity(s) == (std::uint64_t{1} << N));
    }
  }
  REQUIRE(total_multiplicity(enumerate_exact(uniform(10, 0.1, 1.0, 0.2))) == 1024);
}

TEST_CASE("first moments vanish for uniform baths", "[spectrum][property]") {
  for (int N : {5, 12, 30}) {
    const auto s = collapse_uniform(uniform(N, 0.37, 1.3, 0.2));
    double sg = 0, so = 0, scale = 0;
    for (const auto& e : s) {
      const double m = static_cast<double>(e.mult);
      sg += m * e.G;
      so += m * e.Omega;
      scale += m * std::abs(e.Omega);
    }
    REQUIRE(std::abs(sg) <= 1e-12 * scale);
    REQUIRE(std::abs(so) <= 1e-12 * scale);
  }
}

TEST_CASE("weighted sums agree between collapsed and exact", "[spectrum][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int N : {4, 7, 10, 12}) {
    const auto p = uniform(N, 0.2 + 0.1 * u(rng), 1.0, 0.1);
    const double beta = 1.5;
    // arbitrary smooth test functions of (G, Omega, alpha)
    const double a = u(rng), b = u(rng), c = u(rng);
    auto f = [&](const SpectrumEntry& e) {
      return std::exp(-beta * (0.5 * e.Omega + e.alpha)) * std::cos(a * e.G + b * e.Omega + c * e.alpha);
    };
    double exact = 0, collapsed = 0;
    for (const auto& e : enumerate_exact(p)) exact += f(e);
    for (const auto& e : collapse_uniform(p)) collapsed += static_cast<double>(e.mult) * f(e);
    REQUIRE_THAT(collapsed, WithinRel(exact, 1e-12));
  }
}

TEST_CASE("non-uniform baths use exact enumeration", "[spectrum]") {
  ModelParams p;
  p.N = 3;
  p.omega = {1.0, 2.0, 3.0};
  p.chi = {0.1};
  p = validate_params(p);
  REQUIRE_THROWS_AS(collapse_uniform(p), ParamError);
  REQUIRE(build_spectrum(p).size() == 8);
  double om_max = 0;
  for (const auto& e : build_spectrum(p)) om_max = std::max(om_max, e.Omega);
  REQUIRE(om_max == 6.0);
}

TEST_CASE("size guards", "[spectrum]") {
  REQUIRE_THROWS_AS(enumerate_exact(uniform(21, 0.1, 1, 0)), ParamError);
  REQUIRE_THROWS_AS(collapse_uniform(uniform(63, 0.1, 1, 0)), ParamError);
}

TEST_CASE("spectrum CSV dump", "[spectrum]") {
  std::ostringstream os;
  write_spectrum_csv(os, collapse_uniform(uniform(2, 0.5, 1.0, 0.0)));
  REQUIRE(os.str() == "k,w,G,Omega,alpha,multiplicity\n0,-1,1,2,0,1\n1,-1,0,0,0,2\n2,-1,-1,-2,0,1\n");
}
