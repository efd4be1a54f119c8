#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "paleyscope/spectral.hpp"

namespace paleyscope {

struct CorpusSpec {
  std::uint64_t seed = 20240611;
  int count = 20;
  int channels = 1;  // K_H
  double L = 24.0;   // period of the band-limited noise modes
};

struct CorpusBump {
  int channel = 0;
  Complex amplitude;
  std::array<double, 3> center{};
  double sigma = 1.0;
};

struct CorpusMode {
  int channel = 0;
  Complex amplitude;
  std::array<int, 3> k{};  // wave index, xi = 2 pi k / L
  double omega = 0.0;      // temporal phase rate
};

/// Analytic test function: a sin^2 time envelope on [t_on, t_off] times a
/// sum of Gaussian bumps and L-periodic low-frequency modes. Being analytic,
/// it can be sampled on any grid.
struct CorpusFunction {
  int d = 1;
  int channels = 1;
  double L = 24.0;
  double t_on = 0.0;
  double t_off = 1.0;
  std::vector<CorpusBump> bumps;
  std::vector<CorpusMode> modes;

  double envelope(double t) const;
  Complex value(int channel, double t, std::span<const double> x) const;
  SpaceTimeField sample(const SpaceGrid& grid, double t0, double dt, int nt) const;
};

/// Deterministic corpus: parameters are drawn from a counter-based generator
/// keyed on spec.seed, so entry i does not depend on spec.count. Envelopes
/// sit inside [t0, t0 + (nt-1) dt] and end by 70% of the window, leaving
/// trailing zero slices.
std::vector<CorpusFunction> make_corpus(const CorpusSpec& spec, int d, double t0, double dt,
                                        int nt);

}  // namespace paleyscope
