#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "paleyscope/maximal.hpp"

using namespace paleyscope;

namespace {

std::vector<double> random_positive(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

ScalarSpaceTime random_st(const SpaceGrid& g, int nt, double dt, unsigned seed) {
  auto s = ScalarSpaceTime::zeros(g, 0.0, dt, nt);
  s.values = random_positive(s.values.size(), seed);
  return s;
}

// Zero-extended centred time maximal function at one space index.
std::vector<double> time_oracle(const std::vector<double>& f) {
  const int nt = static_cast<int>(f.size());
  std::vector<double> out(nt, 0.0);
  for (int i = 0; i < nt; ++i) {
    for (int m = 0; m <= nt - 1; ++m) {
      double s = 0.0;
      for (int o = -m; o <= m; ++o) {
        if (i + o >= 0 && i + o < nt) s += f[i + o];
      }
      out[i] = std::max(out[i], s / (2 * m + 1));
    }
  }
  return out;
}

}  // namespace

TEST(RadiusLadder, Shapes) {
  EXPECT_EQ(radius_ladder(9, RadiusLadder::dyadic), (std::vector<int>{0, 1, 2, 4, 8, 9}));
  EXPECT_EQ(radius_ladder(8, RadiusLadder::dyadic), (std::vector<int>{0, 1, 2, 4, 8}));
  EXPECT_EQ(radius_ladder(0, RadiusLadder::dyadic), (std::vector<int>{0}));
  EXPECT_EQ(radius_ladder(3, RadiusLadder::full), (std::vector<int>{0, 1, 2, 3}));
}

TEST(MaximalSpace, MatchesBruteForce) {
  const SpaceGrid g(1, 64, 5.0);
  const auto f = random_positive(g.size(), 1);
  const auto fast = maximal_space(g, f, RadiusLadder::full);
  const auto slow = oracle::maximal_1d(f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12);
}

TEST(MaximalSpace, ConstantAndDominance) {
  const SpaceGrid g(2, 16, 4.0);
  const std::vector<double> c(g.size(), 0.7);
  for (double v : maximal_space(g, c)) EXPECT_NEAR(v, 0.7, 1e-14);
  const auto f = random_positive(g.size(), 2);
  const auto Mf = maximal_space(g, f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_GE(Mf[i], f[i] - 1e-15);
}

TEST(MaximalSpace, IndicatorOracle) {
  // Cell-average sampling of 1_[0,1] keeps the total mass exact.
  const SpaceGrid g(1, 1024, 20.0);
  const double h = g.h();
  std::vector<double> f(g.size());
  for (int j = 0; j < g.n; ++j) {
    const double lo = std::max(0.0, g.node(j) - 0.5 * h);
    const double hi = std::min(1.0, g.node(j) + 0.5 * h);
    f[j] = std::max(0.0, hi - lo) / h;
  }
  const auto Mf = maximal_space(g, f, RadiusLadder::full);
  const int j = static_cast<int>(std::lround((2.0 + 0.5 * g.L) / h));
  EXPECT_NEAR(Mf[j], oracle::indicator_maximal(2.0), 1e-3);
  EXPECT_NEAR(Mf[j], 0.25, 1e-3);
}

TEST(MaximalSpace, MonotoneSublinearLadder) {
  const SpaceGrid g(2, 16, 4.0);
  const auto f = random_positive(g.size(), 3);
  auto big = f;
  const auto extra = random_positive(g.size(), 4);
  for (std::size_t i = 0; i < f.size(); ++i) big[i] += extra[i];
  const auto Mf = maximal_space(g, f);
  const auto Me = maximal_space(g, extra);
  const auto Mb = maximal_space(g, big);
  const auto Mfull = maximal_space(g, f, RadiusLadder::full);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_GE(Mb[i], Mf[i]);
    EXPECT_LE(Mb[i], Mf[i] + Me[i] + 1e-12);
    EXPECT_GE(Mfull[i], Mf[i]);
  }
}

TEST(MaximalTime, MatchesBruteForceAndConstants) {
  const SpaceGrid g(1, 8, 1.0);
  const int nt = 21;
  const auto s = random_st(g, nt, 0.1, 5);
  const auto Mt = maximal_time(s, RadiusLadder::full);
  for (std::size_t x = 0; x < g.size(); ++x) {
    std::vector<double> col(nt);
    for (int i = 0; i < nt; ++i) col[i] = s.at(i, x);
    const auto ref = time_oracle(col);
    for (int i = 0; i < nt; ++i) EXPECT_NEAR(Mt.at(i, x), ref[i], 1e-12);
  }

  auto c = ScalarSpaceTime::zeros(g, 0.0, 0.1, nt);
  for (auto& v : c.values) v = 2.0;
  for (double v : maximal_time(c).values) EXPECT_NEAR(v, 2.0, 1e-14);
}

TEST(MaximalTime, TranslationEquivariant) {
  const SpaceGrid g(1, 16, 1.0);
  const auto s = random_st(g, 12, 0.1, 6);
  auto shifted = s;
  for (int i = 0; i < s.nt; ++i) {
    for (int x = 0; x < g.n; ++x) shifted.at(i, (x + 5) % g.n) = s.at(i, x);
  }
  const auto a = maximal_time(s);
  const auto b = maximal_time(shifted);
  for (int i = 0; i < s.nt; ++i) {
    for (int x = 0; x < g.n; ++x) EXPECT_EQ(b.at(i, (x + 5) % g.n), a.at(i, x));
  }
}

TEST(Sharp, FullCentersMatchBruteForce) {
  const SpaceGrid g(1, 16, 4.0);
  const int nt = 10;
  const double dt = 0.05;
  const auto s = random_st(g, nt, dt, 7);
  for (double delta0 : {0.5, 0.25}) {
    SharpOptions full;
    full.full_centers = true;
    const auto fast = sharp_function(s, delta0, full);
    const auto slow = oracle::sharp_1d(s.values, g.n, nt, g.L, dt, delta0);
    for (std::size_t i = 0; i < slow.size(); ++i) EXPECT_NEAR(fast.values[i], slow[i], 1e-12);
    const auto lattice = sharp_function(s, delta0);
    for (std::size_t i = 0; i < slow.size(); ++i) EXPECT_LE(lattice.values[i], fast.values[i] + 1e-12);
  }
}

TEST(Sharp, ConstantVanishesAndLinearIsPositive) {
  const SpaceGrid g(2, 8, 2.0);
  auto c = ScalarSpaceTime::zeros(g, 0.0, 0.1, 6);
  for (auto& v : c.values) v = 3.0;
  for (double v : sharp_function(c, 0.5).values) EXPECT_NEAR(v, 0.0, 1e-14);

  const SpaceGrid g1(1, 64, 8.0);
  auto lin = ScalarSpaceTime::zeros(g1, 0.0, 0.01, 4);
  for (int i = 0; i < lin.nt; ++i) {
    for (int x = 0; x < g1.n; ++x) lin.at(i, x) = g1.node(x);
  }
  SharpOptions full;
  full.full_centers = true;
  const auto sh = sharp_function(lin, 0.5, full);
  const auto ref = oracle::sharp_1d(lin.values, g1.n, lin.nt, g1.L, 0.01, 0.5);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(sh.values[i], ref[i], 1e-12);
  EXPECT_GT(sh.values[g1.n / 2], 0.0);
}

TEST(Sharp, BoundedByTwiceDeviation) {
  // mean_Q |g - g_Q| <= 2 mean_Q |g - c| <= 2 sup |g - c|.
  const SpaceGrid g(1, 16, 4.0);
  const auto s = random_st(g, 8, 0.05, 9);
  SharpOptions full;
  full.full_centers = true;
  const auto sh = sharp_function(s, 0.5, full);
  for (double c : {0.0, 0.5}) {
    auto dev = s;
    for (auto& v : dev.values) v = std::abs(v - c);
    double sup_dev = 0.0;
    for (double v : dev.values) sup_dev = std::max(sup_dev, v);
    for (double v : sh.values) EXPECT_LE(v, 2.0 * sup_dev + 1e-12);
  }
}

TEST(SharpBound, ZeroForcing) {
  const SpaceGrid g(1, 32, 8.0);
  const auto f = SpaceTimeField::zeros(g, 1, 0.0, 0.01, 16);
  const Symbol heat = FractionalSymbol(2.0, TimeCoefficient::constant(1.0), 0.5);
  EXPECT_EQ(verify_sharp_bound(heat, 1.0, f, 0.5), 0.0);
}

TEST(FeffermanStein, DegenerateAndHomogeneous) {
  const SpaceGrid g(1, 16, 4.0);
  auto c = ScalarSpaceTime::zeros(g, 0.0, 0.1, 8);
  for (auto& v : c.values) v = 1.5;
  const auto dc = fefferman_stein_check(c, 2.0, 0.5);
  EXPECT_TRUE(dc.degenerate);
  EXPECT_TRUE(std::isnan(dc.ratio));

  const auto s = random_st(g, 8, 0.1, 11);
  const auto r = fefferman_stein_check(s, 2.0, 0.5);
  EXPECT_FALSE(r.degenerate);
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_TRUE(std::isfinite(r.ratio));
  auto twice = s;
  for (auto& v : twice.values) v *= 2.0;
  EXPECT_NEAR(fefferman_stein_check(twice, 2.0, 0.5).ratio, r.ratio, 1e-12 * r.ratio);
  EXPECT_THROW(fefferman_stein_check(s, 1.0, 0.5), std::invalid_argument);
}
