#pragma once

#include <cstdint>
#include <vector>

#include "paleyscope/spectral.hpp"
#include "paleyscope/symbols.hpp"

namespace paleyscope {

struct NoiseSpec {
  int K = 3;  // Wiener modes
  std::uint64_t seed = 0x5eed5eedULL;
  double dt = 0.01;
  int nt = 128;
};

/// Increments dW^k_j ~ N(0, dt) for k < K, j < nt, laid out [k][j]. Draw
/// (k, j) of a path is a pure function of (seed, path, k, j).
std::vector<double> sample_brownian_increments(const NoiseSpec& spec, std::uint64_t path);

/// u(t_i) = sum_k sum_{j < i} K_eta(t_i, s_j) * f^k(s_j) dW^k_j with
/// K^_eta = |xi|^eta exp(int_s^t psi); one output channel. f's channels are
/// the noise modes, so f.channels() must equal spec.K; f.dt and f.nt()
/// must match the spec.
SpaceTimeField stochastic_convolution(const Symbol& sym, const SpaceTimeField& f,
                                      const NoiseSpec& spec, std::uint64_t path,
                                      double eta = 0.0);

/// Same, from caller-supplied increments laid out as above.
SpaceTimeField stochastic_convolution(const Symbol& sym, const SpaceTimeField& f,
                                      std::span<const double> increments, double eta = 0.0);

struct PathEnsemble {
  int M = 0;
  std::uint64_t seed = 0;
  std::uint64_t first_path = 0;  // path index of samples[0]
  std::vector<int> observation_times;
  // samples[path][obs] : u(t_obs, .) for path first_path + path.
  std::vector<std::vector<Field>> samples;
};

/// M paths with indices first_path .. first_path + M - 1, evaluated only at
/// the observation slices.
PathEnsemble simulate_ensemble(const Symbol& sym, const SpaceTimeField& f,
                               const NoiseSpec& spec, int M,
                               const std::vector<int>& observation_times, double eta = 0.0,
                               std::uint64_t first_path = 0);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int M = 0;
  double mc_mean = 0.0;        // raw Monte Carlo mean
  double deterministic = 0.0;  // comparison value
  bool degenerate = false;
};

/// Relative error of the Monte Carlo E|u(t_i, x)|^2 against
/// sum_k sum_{j<i} |p * f^k(s_j)(x)|^2 dt; std_error is relative too.
MomentEstimate ito_isometry_check(const Symbol& sym, const SpaceTimeField& f,
                                  const NoiseSpec& spec, int M, int time_index,
                                  std::size_t space_index);

struct MomentBound {
  MomentEstimate estimate;  // E ||(-Delta)^{eta/2} u||_p^p / |||f|_H||_p^p
  double majorant = 0.0;    // ||G f||_p^p / |||f|_H||_p^p with the same eta
};

/// Space-time L_p moments over the full window.
MomentBound moment_bound_check(const Symbol& sym, const SpaceTimeField& f,
                               const NoiseSpec& spec, int M, double p, double eta);

struct KurtosisResult {
  double excess_kurtosis = 0.0;
  bool degenerate = false;  // zero variance
};

KurtosisResult excess_kurtosis(std::span<const double> samples);

/// Excess kurtosis of Re u(t_obs, x) across the ensemble.
KurtosisResult gaussianity_diagnostic(const PathEnsemble& ens, int obs, std::size_t space_index);

}  // namespace paleyscope
