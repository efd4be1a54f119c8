#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "paleyscope/plsf.hpp"
#include "paleyscope/spectral.hpp"

using namespace paleyscope;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const SpaceGrid& grid, int channels, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  auto f = Field::zeros(grid, channels);
  for (auto& v : f.values) v = {nd(gen), nd(gen)};
  return f;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

FractionalSymbol heat() { return FractionalSymbol(2.0, TimeCoefficient::constant(1.0), 0.5); }

}  // namespace

TEST(SpaceGrid, Validation) {
  EXPECT_THROW(SpaceGrid(1, 100, 1.0), std::invalid_argument);
  EXPECT_THROW(SpaceGrid(1, 4, 1.0), std::invalid_argument);
  EXPECT_THROW(SpaceGrid(4, 8, 1.0), std::invalid_argument);
  EXPECT_THROW(SpaceGrid(1, 8, 0.0), std::invalid_argument);
  const SpaceGrid g(2, 16, 8.0);
  EXPECT_EQ(g.size(), 256u);
  EXPECT_DOUBLE_EQ(g.h(), 0.5);
  EXPECT_DOUBLE_EQ(g.node(0), -4.0);
  int zeros = 0;
  for (int j = 0; j < g.n; ++j) zeros += g.frequency(j) == 0.0;
  EXPECT_EQ(zeros, 1);
  for (std::size_t idx : {0u, 17u, 255u}) {
    const auto c = g.unravel(idx);
    EXPECT_EQ(g.ravel(std::span<const int>(c.data(), 2)), idx);
  }
}

TEST(Transforms, MatchDirectDft) {
  const SpaceGrid g(1, 32, 7.0);
  const auto f = random_field(g, 1, 3);
  const auto hat = to_frequency(f);
  const auto direct = oracle::forward_dft(f.values, g.L);
  EXPECT_LT(max_abs_diff(hat.values, direct), 1e-12);
  const auto back = oracle::inverse_dft(hat.values, g.L);
  EXPECT_LT(max_abs_diff(back, f.values), 1e-12);
}

TEST(Transforms, RoundTripAllDimensions) {
  for (int d : {1, 2, 3}) {
    const SpaceGrid g(d, 16, 5.0);
    const auto f = random_field(g, 2, 10 + d);
    const auto back = to_space(to_frequency(f));
    EXPECT_LT(max_abs_diff(back.values, f.values), 1e-12);
    EXPECT_THROW(to_space(f), std::invalid_argument);
    EXPECT_THROW(to_frequency(to_frequency(f)), std::invalid_argument);
  }
}

TEST(Transforms, ConstantAndSingleMode) {
  const SpaceGrid g(2, 16, 6.0);
  auto one = Field::zeros(g, 1);
  for (auto& v : one.values) v = 1.0;
  const auto hat = to_frequency(one);
  EXPECT_NEAR(std::abs(hat.values[0] - Complex(36.0)), 0.0, 1e-12);
  for (std::size_t i = 1; i < hat.values.size(); ++i) EXPECT_LT(std::abs(hat.values[i]), 1e-12);

  const SpaceGrid g1(1, 32, 10.0);
  auto wave = Field::zeros(g1, 1);
  const int j = 29;  // signed index -3
  for (int x = 0; x < g1.n; ++x) wave.values[x] = std::polar(1.0, g1.frequency(j) * g1.node(x));
  const auto wh = to_frequency(wave);
  for (int k = 0; k < g1.n; ++k) {
    EXPECT_NEAR(std::abs(wh.values[k]), k == j ? g1.L : 0.0, 1e-11);
  }
}

TEST(Transforms, Parseval) {
  const SpaceGrid g(2, 16, 3.0);
  const auto f = random_field(g, 1, 99);
  const auto hat = to_frequency(f);
  double space = 0.0, freq = 0.0;
  for (const auto& v : f.values) space += std::norm(v);
  for (const auto& v : hat.values) freq += std::norm(v);
  space *= g.cell_volume();
  freq *= std::pow(g.L, -g.d);
  EXPECT_NEAR(space, freq, 1e-12 * space);
}

TEST(Multiplier, IdentityAndEigenfunctions) {
  const SpaceGrid g(1, 32, 2.0 * kPi);
  const auto f = random_field(g, 1, 5);
  const auto same = apply_multiplier(f, [](std::span<const double>) { return Complex(1.0); });
  EXPECT_LT(max_abs_diff(same.values, f.values), 1e-12);

  auto s = Field::zeros(g, 1);
  auto e2 = Field::zeros(g, 1);
  for (int x = 0; x < g.n; ++x) {
    s.values[x] = std::sin(g.node(x));
    e2.values[x] = std::polar(1.0, 2.0 * g.node(x));
  }
  const auto lap = apply_multiplier(s, [](std::span<const double> xi) { return Complex(xi[0] * xi[0]); });
  EXPECT_LT(max_abs_diff(lap.values, s.values), 1e-12);
  const auto w = fractional_multiplier(g, 1.0);
  const auto half = apply_multiplier(e2, [&](std::span<const double> xi) { return Complex(std::abs(xi[0])); });
  for (int x = 0; x < g.n; ++x) EXPECT_NEAR(std::abs(half.values[x] - 2.0 * e2.values[x]), 0.0, 1e-12);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(fractional_multiplier(g, 0.0)[0], 1.0);
}

TEST(Kernel, HatValues) {
  const SpaceGrid g(1, 32, 2.0 * kPi);  // node j = 2 has |xi| = 2
  const auto k0 = kernel_hat(heat(), 0.0, 0.1, 0.0, g);
  const auto k1 = kernel_hat(heat(), 0.0, 0.1, 1.0, g);
  EXPECT_NEAR(std::abs(k0.values[2] - std::exp(-0.4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k1.values[2] - 2.0 * std::exp(-0.4)), 0.0, 1e-15);
  EXPECT_EQ(k1.values[0], Complex{});
  EXPECT_EQ(k0.values[0], Complex(1.0));
  EXPECT_THROW(kernel_hat(heat(), 0.2, 0.1, 0.0, g), std::invalid_argument);
}

TEST(Kernel, PeriodizedGaussian) {
  const SpaceGrid g(1, 256, 20.0);
  const auto p = synthesize_kernel(kernel_hat(heat(), 0.0, 0.1, 0.0, g));
  double err = 0.0;
  for (int x = 0; x < g.n; ++x) {
    err = std::max(err, std::abs(p.values[x] - oracle::periodized_gaussian(g.node(x), 0.1, g.L)));
  }
  EXPECT_LT(err, 1e-8);
}

TEST(Kernel, DeltaAndMass) {
  const SpaceGrid g(2, 16, 4.0);
  const auto delta = synthesize_kernel(kernel_hat(heat(), 0.3, 0.3, 0.0, g));
  const auto ref = discrete_delta(g);
  EXPECT_LT(max_abs_diff(delta.values, ref.values), 1e-12);
  EXPECT_NEAR(std::abs(ref.values[g.size() / 2 + g.n / 2]), 1.0 / g.cell_volume(), 1e-12);

  const auto p = synthesize_kernel(kernel_hat(heat(), 0.0, 0.05, 0.0, g));
  Complex mass{};
  for (const auto& v : p.values) mass += v;
  EXPECT_NEAR(std::abs(mass * g.cell_volume() - 1.0), 0.0, 1e-12);
}

TEST(Kernel, ConvolutionWithDeltaAndIdentity) {
  const SpaceGrid g(1, 64, 10.0);
  const auto k = kernel_hat(heat(), 0.0, 0.2, 0.5, g);
  const auto impulse = convolve_slice(k, discrete_delta(g));
  EXPECT_LT(max_abs_diff(impulse.values, synthesize_kernel(k).values), 1e-12);

  auto unit = k;
  for (auto& v : unit.values) v = 1.0;
  const auto f = random_field(g, 3, 8);
  EXPECT_LT(max_abs_diff(convolve_slice(unit, f).values, f.values), 1e-12);
  const auto fh = to_frequency(f);
  const auto out = convolve_slice(unit, fh);
  EXPECT_EQ(out.domain, Domain::frequency);
}

TEST(Kernel, DecayAlongDoublingTimes) {
  const SpaceGrid g(1, 128, 20.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double tau = 0.01; tau < 5.0; tau *= 2.0) {
    const auto p = synthesize_kernel(kernel_hat(heat(), 0.0, tau, 1.0, g));
    double m = 0.0;
    for (const auto& v : p.values) m = std::max(m, std::abs(v));
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(Kernel, Semigroup) {
  const SpaceGrid g(1, 64, 12.0);
  auto f = Field::zeros(g, 1);
  for (int x = 0; x < g.n; ++x) f.values[x] = std::exp(-g.node(x) * g.node(x));
  const auto ts = kernel_hat(heat(), 0.3, 0.5, 0.0, g);
  const auto sr = kernel_hat(heat(), 0.1, 0.3, 0.0, g);
  const auto tr = kernel_hat(heat(), 0.1, 0.5, 0.0, g);
  const auto twice = convolve_slice(ts, convolve_slice(sr, f));
  const auto once = convolve_slice(tr, f);
  double scale = 0.0;
  for (const auto& v : once.values) scale = std::max(scale, std::abs(v));
  EXPECT_LT(max_abs_diff(twice.values, once.values), 1e-10 * scale);
}

TEST(PhaseTable, MatchesDirectIntegrals) {
  const SpaceGrid g(1, 16, 6.0);
  const FractionalSymbol td(1.0, TimeCoefficient({0.0, 0.05}, {{1.0, 0.5}, {1.5, -0.2}}), 0.5);
  const PhaseTable table(td, g, 0.0, 0.02, 8);
  std::vector<double> xi(1);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        g.wavevector(idx, xi);
        const Complex direct = symbol_time_integral(td, 0.02 * j, 0.02 * i, xi);
        EXPECT_NEAR(std::abs(table.exponent(i, j, idx) - direct), 0.0, 1e-13);
      }
    }
  }
}

TEST(Aliasing, BudgetReflectsResolution) {
  const SpaceGrid coarse(1, 32, 20.0);
  const SpaceGrid fine(1, 256, 20.0);
  EXPECT_GT(aliasing_budget(heat(), coarse, 0.01), 1e-12);
  EXPECT_LT(aliasing_budget(heat(), fine, 0.1), 1e-12);
}

TEST(Plsf, RoundTripAndHeader) {
  const SpaceGrid g(2, 8, 3.5);
  auto f = random_field(g, 2, 21);
  const auto path = std::filesystem::temp_directory_path() / "paleyscope_test.plsf";
  write_plsf(path, f);
  EXPECT_EQ(std::filesystem::file_size(path), 32u + 8u * g.size() * 2u);

  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "PLSF");
  std::uint32_t hdr[3];
  in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  EXPECT_EQ(hdr[0], 2u);
  EXPECT_EQ(hdr[1], 8u);
  EXPECT_EQ(hdr[2], 2u);
  double L = 0;
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  EXPECT_EQ(L, 3.5);

  const auto back = read_plsf(path);
  EXPECT_EQ(back.grid, g);
  EXPECT_EQ(back.channels, 2);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    EXPECT_NEAR(std::abs(back.values[i] - f.values[i]), 0.0, 1e-6 * (1.0 + std::abs(f.values[i])));
  }
  std::filesystem::remove(path);
}
