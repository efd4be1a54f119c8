#include "paleyscope/squarefn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "paleyscope/parallel.hpp"

namespace paleyscope {
namespace {

struct SpectralSlices {
  std::vector<Field> hat;     // per slice, frequency domain
  std::vector<bool> nonzero;  // slice has any nonzero sample
};

SpectralSlices transform_slices(const SpaceTimeField& f) {
  SpectralSlices out;
  out.hat.resize(f.nt());
  out.nonzero.resize(f.nt());
  parallel_for(static_cast<std::size_t>(f.nt()), [&](std::size_t i) {
    const auto& s = f.slices[i];
    bool any = false;
    for (const Complex& v : s.values) any = any || v != Complex{};
    out.nonzero[i] = any;
    if (any) out.hat[i] = to_frequency(s);
  });
  return out;
}

double trapezoid_weight(int i, int j, double dt) {
  if (i == 0) return 0.0;
  return (j == 0 || j == i) ? 0.5 * dt : dt;
}

double integer_power_check(double c, double gamma) {
  const double cg = std::pow(c, gamma);
  const double rounded = std::round(cg);
  if (std::abs(cg - rounded) > 1e-12 * rounded) {
    throw std::invalid_argument("scaling_check: incompatible c (c^gamma not an integer)");
  }
  return rounded;
}

}  // namespace

SquareField square_function(const Symbol& sym, double eta, const SpaceTimeField& f) {
  if (eta < 0.0) throw std::invalid_argument("square_function: eta must be >= 0");
  f.validate();
  const SpaceGrid& grid = f.grid();
  const std::size_t N = grid.size();
  const int nt = f.nt();
  const PhaseTable phase(sym, grid, f.t0, f.dt, nt);
  const auto weight = fractional_multiplier(grid, eta);
  const auto spectra = transform_slices(f);

  auto G = SquareField::zeros(grid, f.t0, f.dt, nt);
  parallel_for(static_cast<std::size_t>(nt), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    std::vector<double> acc(N, 0.0);
    std::vector<Complex> prop(N), buf(N);
    for (int j = 0; j <= i; ++j) {
      const double w = trapezoid_weight(i, j, f.dt);
      if (w == 0.0 || !spectra.nonzero[j]) continue;
      for (std::size_t idx = 0; idx < N; ++idx) {
        prop[idx] = weight[idx] == 0.0 ? Complex{} : weight[idx] * std::exp(phase.exponent(i, j, idx));
      }
      for (int k = 0; k < f.channels(); ++k) {
        const auto src = spectra.hat[j].channel(k);
        for (std::size_t idx = 0; idx < N; ++idx) buf[idx] = prop[idx] * src[idx];
        inverse_transform(grid, buf);
        for (std::size_t idx = 0; idx < N; ++idx) acc[idx] += w * std::norm(buf[idx]);
      }
    }
    auto dst = G.slice(i);
    for (std::size_t idx = 0; idx < N; ++idx) dst[idx] = std::sqrt(acc[idx]);
  });
  return G;
}

double lp_space_time_norm(const SquareField& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_space_time_norm: p must be >= 1");
  double acc = 0.0;
  for (double v : g.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * g.grid.cell_volume() * g.dt, 1.0 / p);
}

double lp_space_time_norm(const SpaceTimeField& f, double p) {
  const auto energy = channel_energy(f);
  auto modulus = energy;
  for (double& v : modulus.values) v = std::sqrt(v);
  return lp_space_time_norm(modulus, p);
}

std::vector<LpReport> lp_ratios(const Symbol& sym, double eta, const SpaceTimeField& f,
                                const std::vector<double>& ps) {
  const auto G = square_function(sym, eta, f);
  std::vector<LpReport> out;
  for (double p : ps) {
    LpReport r;
    r.p = p;
    r.d = f.grid().d;
    r.n = f.grid().n;
    r.nt = f.nt();
    r.norm_G = lp_space_time_norm(G, p);
    r.norm_f = lp_space_time_norm(f, p);
    r.degenerate = r.norm_f == 0.0;
    r.ratio = r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.norm_G / r.norm_f;
    out.push_back(r);
  }
  return out;
}

LpReport lp_ratio(const Symbol& sym, double eta, const SpaceTimeField& f, double p) {
  return lp_ratios(sym, eta, f, {p}).front();
}

double frequency_side_energy(const Symbol& sym, double eta, const SpaceTimeField& f) {
  if (eta < 0.0) throw std::invalid_argument("frequency_side_energy: eta must be >= 0");
  f.validate();
  const SpaceGrid& grid = f.grid();
  const std::size_t N = grid.size();
  const int nt = f.nt();
  const PhaseTable phase(sym, grid, f.t0, f.dt, nt);
  const auto weight = fractional_multiplier(grid, 2.0 * eta);
  const auto spectra = transform_slices(f);

  // |f^(s_j, xi)|_H^2 per slice.
  std::vector<std::vector<double>> power(nt);
  for (int j = 0; j < nt; ++j) {
    if (!spectra.nonzero[j]) continue;
    power[j].assign(N, 0.0);
    for (int k = 0; k < f.channels(); ++k) {
      const auto src = spectra.hat[j].channel(k);
      for (std::size_t idx = 0; idx < N; ++idx) power[j][idx] += std::norm(src[idx]);
    }
  }

  std::vector<double> per_time(nt, 0.0);
  parallel_for(static_cast<std::size_t>(nt), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      const double w = trapezoid_weight(i, j, f.dt);
      if (w == 0.0 || !spectra.nonzero[j]) continue;
      for (std::size_t idx = 0; idx < N; ++idx) {
        if (weight[idx] == 0.0) continue;
        acc += w * weight[idx] * std::exp(2.0 * phase.exponent(i, j, idx).real()) * power[j][idx];
      }
    }
    per_time[i] = acc;
  });
  double total = 0.0;
  for (double v : per_time) total += v;
  return total * f.dt * std::pow(grid.L, -grid.d);
}

LpReport elliptic_square_function(const Field& f, double gamma, double p, double du) {
  if (!(gamma > 0.0)) throw std::invalid_argument("elliptic_square_function: gamma must be > 0");
  if (!(du > 0.0)) throw std::invalid_argument("elliptic_square_function: du must be > 0");
  if (f.domain != Domain::space) throw std::invalid_argument("elliptic_square_function: space field expected");
  const SpaceGrid& grid = f.grid;
  const std::size_t N = grid.size();
  const Field hat = to_frequency(f);
  const auto amp = fractional_multiplier(grid, gamma);
  const auto rate = fractional_multiplier(grid, 2.0 * gamma);

  double rate_min = std::numeric_limits<double>::infinity();
  double rate_max = 0.0;
  for (double r : rate) {
    if (r > 0.0) {
      rate_min = std::min(rate_min, r);
      rate_max = std::max(rate_max, r);
    }
  }

  LpReport report;
  report.p = p;
  report.d = grid.d;
  report.n = grid.n;
  report.nt = 0;

  std::vector<double> acc(N, 0.0);
  if (rate_max > 0.0) {
    // Per mode the integrand in u is rate e^u exp(-2 rate e^u): the left tail
    // below u_lo carries rate/rate_max e^{-30}, the right tail is
    // double-exponentially small beyond u_hi.
    const double u_lo = -std::log(rate_max) - 30.0;
    const double u_hi = -std::log(rate_min) + std::log(25.0);
    const int nodes = static_cast<int>(std::ceil((u_hi - u_lo) / du)) + 1;
    report.nt = nodes;
    std::vector<std::vector<double>> partial(nodes);
    parallel_for(static_cast<std::size_t>(nodes), [&](std::size_t m) {
      const double t = std::exp(u_lo + static_cast<double>(m) * du);
      const double w = du * t * ((m == 0 || m + 1 == static_cast<std::size_t>(nodes)) ? 0.5 : 1.0);
      std::vector<double> local(N, 0.0);
      std::vector<Complex> buf(N);
      for (int k = 0; k < f.channels; ++k) {
        const auto src = hat.channel(k);
        for (std::size_t idx = 0; idx < N; ++idx) {
          buf[idx] = amp[idx] * std::exp(-t * rate[idx]) * src[idx];
        }
        inverse_transform(grid, buf);
        for (std::size_t idx = 0; idx < N; ++idx) local[idx] += w * std::norm(buf[idx]);
      }
      partial[m] = std::move(local);
    });
    for (const auto& local : partial) {
      for (std::size_t idx = 0; idx < N; ++idx) acc[idx] += local[idx];
    }
  }

  double sum_G = 0.0;
  double sum_f = 0.0;
  for (std::size_t idx = 0; idx < N; ++idx) {
    sum_G += std::pow(acc[idx], 0.5 * p);
    double e = 0.0;
    for (int k = 0; k < f.channels; ++k) e += std::norm(f.channel(k)[idx]);
    sum_f += std::pow(e, 0.5 * p);
  }
  const double h = grid.cell_volume();
  report.norm_G = std::pow(h * sum_G, 1.0 / p);
  report.norm_f = std::pow(h * sum_f, 1.0 / p);
  report.degenerate = report.norm_f == 0.0;
  report.ratio = report.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                   : report.norm_G / report.norm_f;
  return report;
}

double scaling_check(const FractionalSymbol& sym, const SpaceTimeField& f, int c) {
  if (c < 1) throw std::invalid_argument("scaling_check: incompatible c (must be a positive integer)");
  if (!sym.time_independent()) throw std::invalid_argument("scaling_check: symbol must be time independent");
  if (f.t0 != 0.0) throw std::invalid_argument("scaling_check: incompatible c (window must start at t = 0)");
  f.validate();
  const int cg = static_cast<int>(integer_power_check(c, sym.gamma()));
  const SpaceGrid& grid = f.grid();
  const std::size_t N = grid.size();
  const int nt = f.nt();
  const int n = grid.n;

  // Index of c * x_j on the periodic grid, per axis.
  std::vector<std::size_t> space_map(N);
  for (std::size_t idx = 0; idx < N; ++idx) {
    const auto k = grid.unravel(idx);
    int mapped[3];
    for (int a = 0; a < grid.d; ++a) mapped[a] = c * k[a] - (c - 1) * (n / 2);
    space_map[idx] = grid.ravel(std::span<const int>(mapped, grid.d));
  }

  auto fc = SpaceTimeField::zeros(grid, f.channels(), f.t0, f.dt, nt);
  for (int i = 0; i * cg < nt; ++i) {
    for (int k = 0; k < f.channels(); ++k) {
      const auto src = f.slices[i * cg].channel(k);
      auto dst = fc.slices[i].channel(k);
      for (std::size_t idx = 0; idx < N; ++idx) dst[idx] = src[space_map[idx]];
    }
  }

  const Symbol s = sym;
  const double eta = 0.5 * sym.gamma();
  const auto G = square_function(s, eta, f);
  const auto Gc = square_function(s, eta, fc);

  double scale = 0.0;
  for (double v : G.values) scale = std::max(scale, v);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i * cg < nt; ++i) {
    for (std::size_t idx = 0; idx < N; ++idx) {
      worst = std::max(worst, std::abs(Gc.at(i, idx) - G.at(i * cg, space_map[idx])));
    }
  }
  return worst / scale;
}

}  // namespace paleyscope
