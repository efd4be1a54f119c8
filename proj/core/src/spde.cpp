#include "paleyscope/spde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "paleyscope/parallel.hpp"
#include "paleyscope/rng.hpp"
#include "paleyscope/squarefn.hpp"

namespace paleyscope {
namespace {

// Everything about the forcing that does not depend on the path.
struct Forcing {
  SpaceGrid grid;
  int K = 0;
  int nt = 0;
  double dt = 0.0;
  std::vector<Field> hat;       // per slice, frequency domain
  std::vector<bool> nonzero;    // per slice
  std::vector<Complex> step;    // (nt-1) x N one-step propagators
  std::vector<double> weight;   // |xi|^eta
};

Forcing prepare(const Symbol& sym, const SpaceTimeField& f, double eta) {
  f.validate();
  Forcing fc;
  fc.grid = f.grid();
  fc.K = f.channels();
  fc.nt = f.nt();
  fc.dt = f.dt;
  const std::size_t N = fc.grid.size();
  fc.hat.resize(fc.nt);
  fc.nonzero.resize(fc.nt);
  for (int j = 0; j < fc.nt; ++j) {
    bool any = false;
    for (const Complex& v : f.slices[j].values) any = any || v != Complex{};
    fc.nonzero[j] = any;
    if (any) fc.hat[j] = to_frequency(f.slices[j]);
  }
  const PhaseTable phase(sym, fc.grid, f.t0, f.dt, fc.nt);
  fc.step.resize(static_cast<std::size_t>(std::max(0, fc.nt - 1)) * N);
  for (int i = 0; i + 1 < fc.nt; ++i) {
    phase.propagator(i + 1, i, std::span<Complex>(fc.step).subspan(i * N, N));
  }
  fc.weight = fractional_multiplier(fc.grid, eta);
  return fc;
}

// Runs the frequency recursion S_{i+1} = e^{Phi_{i+1}-Phi_i}(S_i + sum_k f^k_i dW^k_i)
// and calls visit(i, S_i) for every slice i.
template <class Visit>
void run_path(const Forcing& fc, std::span<const double> dW, Visit&& visit) {
  const std::size_t N = fc.grid.size();
  std::vector<Complex> S(N, Complex{});
  visit(0, S);
  for (int i = 0; i + 1 < fc.nt; ++i) {
    if (fc.nonzero[i]) {
      for (int k = 0; k < fc.K; ++k) {
        const double w = dW[static_cast<std::size_t>(k) * fc.nt + i];
        const auto src = fc.hat[i].channel(k);
        for (std::size_t idx = 0; idx < N; ++idx) S[idx] += src[idx] * w;
      }
    }
    const Complex* prop = fc.step.data() + i * N;
    for (std::size_t idx = 0; idx < N; ++idx) S[idx] *= prop[idx];
    visit(i + 1, S);
  }
}

Field to_space_weighted(const Forcing& fc, const std::vector<Complex>& S) {
  Field u = Field::zeros(fc.grid, 1, Domain::frequency);
  for (std::size_t idx = 0; idx < S.size(); ++idx) u.values[idx] = fc.weight[idx] * S[idx];
  return to_space(u);
}

void check_spec(const NoiseSpec& spec, const SpaceTimeField& f) {
  if (spec.K < 1) throw std::invalid_argument("NoiseSpec: K must be >= 1");
  if (!(spec.dt > 0.0)) throw std::invalid_argument("NoiseSpec: dt must be positive");
  if (spec.nt < 1) throw std::invalid_argument("NoiseSpec: nt must be >= 1");
  if (f.channels() != spec.K || f.nt() != spec.nt || std::abs(f.dt - spec.dt) > 1e-15 * spec.dt) {
    throw std::invalid_argument("stochastic convolution: forcing does not match the noise spec");
  }
}

double mean_and_error(std::vector<double>& values, double& std_error) {
  const double M = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / M;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = values.size() > 1 ? pairwise_sum(sq) / (M - 1.0) : 0.0;
  std_error = std::sqrt(var / M);
  return mean;
}

}  // namespace

std::vector<double> sample_brownian_increments(const NoiseSpec& spec, std::uint64_t path) {
  if (spec.K < 1 || spec.nt < 1 || !(spec.dt > 0.0)) {
    throw std::invalid_argument("sample_brownian_increments: invalid NoiseSpec");
  }
  const CounterRng rng(spec.seed);
  const double scale = std::sqrt(spec.dt);
  std::vector<double> out(static_cast<std::size_t>(spec.K) * spec.nt);
  for (int k = 0; k < spec.K; ++k) {
    for (int j = 0; j < spec.nt; ++j) {
      out[static_cast<std::size_t>(k) * spec.nt + j] =
          scale * rng.normal(path, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(j));
    }
  }
  return out;
}

SpaceTimeField stochastic_convolution(const Symbol& sym, const SpaceTimeField& f,
                                      std::span<const double> increments, double eta) {
  const Forcing fc = prepare(sym, f, eta);
  if (increments.size() != static_cast<std::size_t>(fc.K) * fc.nt) {
    throw std::invalid_argument("stochastic_convolution: increment count mismatch");
  }
  auto u = SpaceTimeField::zeros(fc.grid, 1, f.t0, f.dt, fc.nt);
  run_path(fc, increments, [&](int i, const std::vector<Complex>& S) {
    u.slices[i] = to_space_weighted(fc, S);
  });
  return u;
}

SpaceTimeField stochastic_convolution(const Symbol& sym, const SpaceTimeField& f,
                                      const NoiseSpec& spec, std::uint64_t path, double eta) {
  check_spec(spec, f);
  const auto dW = sample_brownian_increments(spec, path);
  return stochastic_convolution(sym, f, dW, eta);
}

PathEnsemble simulate_ensemble(const Symbol& sym, const SpaceTimeField& f,
                               const NoiseSpec& spec, int M,
                               const std::vector<int>& observation_times, double eta,
                               std::uint64_t first_path) {
  check_spec(spec, f);
  if (M < 1) throw std::invalid_argument("simulate_ensemble: M must be >= 1");
  for (int t : observation_times) {
    if (t < 0 || t >= f.nt()) throw std::invalid_argument("simulate_ensemble: observation time out of range");
  }
  const Forcing fc = prepare(sym, f, eta);
  PathEnsemble ens;
  ens.M = M;
  ens.seed = spec.seed;
  ens.first_path = first_path;
  ens.observation_times = observation_times;
  ens.samples.resize(M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t m) {
    const auto dW = sample_brownian_increments(spec, first_path + m);
    auto& out = ens.samples[m];
    out.resize(observation_times.size());
    run_path(fc, dW, [&](int i, const std::vector<Complex>& S) {
      for (std::size_t o = 0; o < observation_times.size(); ++o) {
        if (observation_times[o] == i) out[o] = to_space_weighted(fc, S);
      }
    });
  });
  return ens;
}

MomentEstimate ito_isometry_check(const Symbol& sym, const SpaceTimeField& f,
                                  const NoiseSpec& spec, int M, int time_index,
                                  std::size_t space_index) {
  check_spec(spec, f);
  if (space_index >= f.grid().size()) throw std::invalid_argument("ito_isometry_check: space index out of range");
  const auto ens = simulate_ensemble(sym, f, spec, M, {time_index});

  // Deterministic side: sum_k sum_{j < i} |p(t_i, s_j) * f^k(s_j)(x)|^2 dt.
  const SpaceGrid& grid = f.grid();
  const std::size_t N = grid.size();
  const PhaseTable phase(sym, grid, f.t0, f.dt, f.nt());
  std::vector<double> terms;
  std::vector<Complex> prop(N), buf(N);
  for (int j = 0; j < time_index; ++j) {
    bool any = false;
    for (const Complex& v : f.slices[j].values) any = any || v != Complex{};
    if (!any) continue;
    const Field hat = to_frequency(f.slices[j]);
    phase.propagator(time_index, j, prop);
    for (int k = 0; k < f.channels(); ++k) {
      const auto src = hat.channel(k);
      for (std::size_t idx = 0; idx < N; ++idx) buf[idx] = prop[idx] * src[idx];
      inverse_transform(grid, buf);
      terms.push_back(std::norm(buf[space_index]) * f.dt);
    }
  }
  const double deterministic = terms.empty() ? 0.0 : pairwise_sum(terms);

  std::vector<double> values(M);
  for (int m = 0; m < M; ++m) values[m] = std::norm(ens.samples[m][0].values[space_index]);
  double se = 0.0;
  const double mc = mean_and_error(values, se);

  MomentEstimate est;
  est.M = M;
  est.mc_mean = mc;
  est.deterministic = deterministic;
  if (deterministic == 0.0) {
    est.degenerate = true;
    est.value = mc == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return est;
  }
  est.value = (mc - deterministic) / deterministic;
  est.std_error = se / deterministic;
  return est;
}

MomentBound moment_bound_check(const Symbol& sym, const SpaceTimeField& f,
                               const NoiseSpec& spec, int M, double p, double eta) {
  check_spec(spec, f);
  if (!(p >= 2.0)) throw std::invalid_argument("moment_bound_check: p must be >= 2");
  if (M < 1) throw std::invalid_argument("moment_bound_check: M must be >= 1");
  const Forcing fc = prepare(sym, f, eta);
  const double cell = fc.grid.cell_volume() * fc.dt;

  std::vector<double> per_path(M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t m) {
    const auto dW = sample_brownian_increments(spec, m);
    std::vector<double> slices(fc.nt, 0.0);
    run_path(fc, dW, [&](int i, const std::vector<Complex>& S) {
      const Field u = to_space_weighted(fc, S);
      double acc = 0.0;
      for (const Complex& v : u.values) acc += std::pow(std::abs(v), p);
      slices[i] = acc * cell;
    });
    per_path[m] = pairwise_sum(slices);
  });

  const double fp = std::pow(lp_space_time_norm(f, p), p);
  MomentBound out;
  out.estimate.M = M;
  if (fp == 0.0) {
    out.estimate.degenerate = true;
    return out;
  }
  double se = 0.0;
  const double mean = mean_and_error(per_path, se);
  out.estimate.mc_mean = mean;
  out.estimate.value = mean / fp;
  out.estimate.std_error = se / fp;
  const auto G = square_function(sym, eta, f);
  out.majorant = std::pow(lp_space_time_norm(G, p), p) / fp;
  out.estimate.deterministic = out.majorant;
  return out;
}

KurtosisResult excess_kurtosis(std::span<const double> samples) {
  KurtosisResult res;
  if (samples.size() < 2) {
    res.degenerate = true;
    return res;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  std::vector<double> d2(samples.size()), d4(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = samples[i] - mean;
    d2[i] = c * c;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2) / n;
  const double m4 = pairwise_sum(d4) / n;
  if (!(m2 > 0.0)) {
    res.degenerate = true;
    res.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return res;
}

KurtosisResult gaussianity_diagnostic(const PathEnsemble& ens, int obs, std::size_t space_index) {
  std::vector<double> re(ens.samples.size());
  for (std::size_t m = 0; m < re.size(); ++m) re[m] = ens.samples[m].at(obs).values.at(space_index).real();
  return excess_kurtosis(re);
}

}  // namespace paleyscope
