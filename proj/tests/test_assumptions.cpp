#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "paleyscope/assumptions.hpp"

using namespace paleyscope;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

FractionalSymbol frac(double gamma, double a = 1.0, double nu = 0.5) {
  return FractionalSymbol(gamma, TimeCoefficient::constant(a), nu);
}

}  // namespace

TEST(Rationals, Parse) {
  EXPECT_EQ(parse_rational("3"), R(3));
  EXPECT_EQ(parse_rational("-1/2"), R(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), R(1, 4));
  EXPECT_EQ(parse_rational("1e-3"), R(1, 1000));
  EXPECT_EQ(parse_rational("2.5E1"), R(25));
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_EQ(rational_from_double(0.5), R(1, 2));
  EXPECT_EQ(rational_from_double(1.0 / 3.0), R(1, 3));
  EXPECT_EQ(to_string(R(-3, 4)), "-3/4");
}

TEST(Exponents, C3Delta0) {
  const auto r = derive_c3_delta0(R(1), 1);
  EXPECT_EQ(r.c3, R(11, 6));
  EXPECT_EQ(r.delta0, R(1, 6));
  EXPECT_THROW(derive_c3_delta0(R(1, 2), 1), std::invalid_argument);

  std::mt19937 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 6);
    const Rational c2(1 + static_cast<std::int64_t>(gen() % 200), 1 + static_cast<std::int64_t>(gen() % 50));
    if (!(c2 > R(1, 2))) continue;
    const auto v = derive_c3_delta0(c2, d);
    EXPECT_EQ(v.delta0, (c2 * R(2) - R(1)) / R(2 * (d + 2)));
    EXPECT_TRUE(v.delta0 > R(0));
  }
  const auto near = derive_c3_delta0(R(1000001, 2000000), 1);
  EXPECT_LT(to_double(near.delta0), 1e-6);
  EXPECT_TRUE(near.delta0 > R(0));
}

TEST(Exponents, Theta) {
  EXPECT_EQ(theta(R(0), R(0), 3), R(0));
  const auto v = derive_c3_delta0(R(1), 1);
  EXPECT_EQ(theta(v.delta0 * R(2), v.c3 - v.delta0, 1), R(-3));
  EXPECT_EQ(theta(v.delta0 * R(2), R(1) - v.delta0, 1), -v.delta0 * R(2) - R(1));
  const Rational a(3, 7), b(-2, 5), c(11, 3), e(1, 9);
  for (int d : {1, 2, 5}) {
    EXPECT_EQ(theta(a + c, b + e, d), theta(a, b, d) + theta(c, e, d));
  }
  EXPECT_DOUBLE_EQ(theta(0.5, 0.25, 2), 0.5);
}

TEST(Exponents, MuAdmissible) {
  EXPECT_TRUE(mu_admissible(R(16, 5), 1));
  EXPECT_FALSE(mu_admissible(R(8), 1));
  EXPECT_TRUE(mu_admissible(R(8), 10));
  EXPECT_TRUE(mu_admissible(3.2, 1));
  EXPECT_FALSE(mu_admissible(8.0, 1));
}

TEST(Exponents, SolveMuSyntheticRow) {
  // d = 2, c2 = 1: delta0 = 1/8. Row 2 with kappa = -3/8 and sigma = -1/2
  // reads (1/2) mu = 2.
  KernelExponents ke = make_exponents(R(1), 2, {R(1, 8), R(-3, 8), R(1, 8)},
                                      {R(0), R(-1, 2), R(0)});
  EXPECT_EQ(ke.delta0, R(1, 8));
  EXPECT_EQ(matrix_rhs(ke, 1), R(2));
  auto solved = solve_mu(ke);
  ASSERT_TRUE(solved.mu[1].has_value());
  EXPECT_EQ(*solved.mu[1], R(4));
  EXPECT_FALSE(solved.free[1]);
  EXPECT_FALSE(solved.valid[1]);  // 4 <= d + 2

  // Same row in d = 1 (d + 2 = 3): delta0 = 1/6, kappa = -1/3, sigma = -1/4.
  KernelExponents ke1 = make_exponents(R(1), 1, {R(1, 6), R(-1, 3), R(1, 6)},
                                       {R(0), R(-1, 4), R(0)});
  EXPECT_EQ(matrix_rhs(ke1, 1), R(2));
  solved = solve_mu(ke1);
  EXPECT_EQ(*solved.mu[1], R(4));
  EXPECT_TRUE(solved.valid[1]);
}

TEST(Exponents, DegenerateRowNeedsZeroRhs) {
  // kappa = delta0 and sigma2 != c2 gives 0 * mu = nonzero.
  KernelExponents ke = make_exponents(R(1), 1, {R(1, 6), R(1, 6), R(1, 6)},
                                      {R(0), R(2), R(0)});
  ASSERT_NE(matrix_rhs(ke, 1), R(0));
  const auto solved = solve_mu(ke);
  EXPECT_FALSE(solved.valid[1]);
  EXPECT_FALSE(solved.mu[1].has_value());
  EXPECT_FALSE(solved.diagnostic[1].empty());
  EXPECT_FALSE(solved.all_valid());
}

TEST(Exponents, TheoremInstantiation) {
  const auto ke = theorem_exponents(R(2), 1);
  EXPECT_EQ(ke.c2, R(2));
  EXPECT_EQ(ke.c3, R(5, 2));
  EXPECT_EQ(ke.delta0, R(1, 2));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(ke.rhs[i], R(0));
    EXPECT_TRUE(ke.free[i]);
    EXPECT_TRUE(ke.valid[i]);
    ASSERT_TRUE(ke.mu[i].has_value());
    EXPECT_TRUE(*ke.mu[i] > R(3));
    EXPECT_TRUE(mu_admissible(*ke.mu[i], 1));
  }
  for (const char* g : {"1/2", "1", "2", "4", "3/2"}) {
    for (int d : {1, 2, 3}) {
      const auto e = theorem_exponents(parse_rational(g), d);
      EXPECT_EQ(e.delta0, R(1) / parse_rational(g));
      EXPECT_TRUE(e.c2 > R(1, 2));
      EXPECT_TRUE(theta_identities(e).exact()) << g << " d=" << d;
      if (e.valid[0]) {
        EXPECT_TRUE(-e.sigma[0] * R(2) + e.kappa[0] * (*e.mu[0] + R(d)) > R(-1));
      }
    }
  }
}

TEST(Envelopes, MatchDirectInverseSum) {
  const SpaceGrid g(1, 128, 20.0);
  const Symbol heat = frac(2.0);
  const auto env = synthesize_envelopes(heat, 2.0, g, 0.0, 1.0);
  std::vector<oracle::Complex> hat(g.n);
  for (int k = 0; k < g.n; ++k) {
    const double xi = oracle::frequency(k, g.n, g.L);
    hat[k] = xi * std::abs(xi) * std::exp(-xi * xi);
  }
  const auto direct = oracle::inverse_dft(hat, g.L);
  double scale = 0.0;
  for (const auto& v : direct) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < g.n; ++j) {
    EXPECT_NEAR(env.F[0][j], std::abs(direct[j]), 1e-6 * scale);
  }
  for (const auto& F : env.F) {
    for (double v : F) {
      EXPECT_GE(v, 0.0);
      EXPECT_TRUE(std::isfinite(v));
    }
  }
}

TEST(Envelopes, TimeIndependentSymbolGivesSameEnvelopes) {
  const SpaceGrid g(1, 64, 16.0);
  const Symbol sym = frac(1.5);
  const auto a = synthesize_envelopes(sym, 1.5, g, 0.0, 0.3);
  const auto b = synthesize_envelopes(sym, 1.5, g, 1.0, 4.0);
  for (int i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < a.F[i].size(); ++j) {
      EXPECT_NEAR(a.F[i][j], b.F[i][j], 1e-12 * (1.0 + a.F[i][j]));
    }
  }
}

TEST(Moments, ZeroAndMonotone) {
  const SpaceGrid g(1, 256, 20.0);
  const std::vector<double> zero(g.size(), 0.0);
  const auto rz = moment_integral(g, zero, 3.5, {0.0, 0.5, 1.0});
  EXPECT_TRUE(rz.converged);
  for (double v : rz.tail_integrals) EXPECT_EQ(v, 0.0);
  for (double v : rz.partial_integrals) EXPECT_EQ(v, 0.0);

  std::vector<double> gauss(g.size());
  for (int j = 0; j < g.n; ++j) gauss[j] = std::exp(-g.node(j) * g.node(j));
  const auto r = moment_integral(g, gauss, 3.5, {0.0, 0.5, 1.0, 2.0});
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 1; i < r.tail_integrals.size(); ++i) {
    EXPECT_LE(r.tail_integrals[i], r.tail_integrals[i - 1]);
  }
  for (std::size_t i = 1; i < r.partial_integrals.size(); ++i) {
    EXPECT_GE(r.partial_integrals[i], r.partial_integrals[i - 1]);
  }
  // int |x|^3.5 e^{-2x^2} dx = Gamma(9/4) 2^{-9/4}
  EXPECT_NEAR(r.value, std::tgamma(2.25) * std::pow(2.0, -2.25), 1e-4);
}

TEST(Assumption1, ClosedForms) {
  std::vector<std::vector<double>> samples;
  for (double r : {0.01, 0.3, 1.0, 7.0, 40.0}) samples.push_back({r});
  samples.push_back({-2.5});
  for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
    const Symbol s = frac(gamma);
    for (const auto& xi : samples) {
      EXPECT_NEAR(assumption1_integral(s, 0.5 * gamma, xi), 0.5, 1e-6) << gamma;
    }
  }
  const Symbol weak = frac(2.0, 0.6, 0.5);
  EXPECT_NEAR(verify_assumption1(weak, 1.0, samples), 1.0 / 1.2, 1e-6);
  EXPECT_EQ(assumption1_integral(frac(2.0), 1.0, std::vector<double>{0.0}), 0.0);

  const Symbol h = frac(2.0);
  const std::vector<double> xi{1.7};
  EXPECT_NEAR(assumption1_integral(h, 1.0, xi, 0.0), assumption1_integral(h, 1.0, xi, 3.0), 1e-9);
}

TEST(Assumption1, ComplexCoefficientUsesRealPart) {
  const Symbol s = FractionalSymbol(1.0, TimeCoefficient::constant({0.8, 3.0}), 0.5);
  EXPECT_NEAR(assumption1_integral(s, 0.5, std::vector<double>{2.0}), 1.0 / 1.6, 1e-6);
}
