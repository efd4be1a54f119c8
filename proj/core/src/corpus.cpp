#include "paleyscope/corpus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "paleyscope/rng.hpp"

namespace paleyscope {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBand = 1.5;  // |xi| bound of the noise modes

class Draws {
 public:
  Draws(const CounterRng& rng, std::uint64_t stream) : rng_(rng), stream_(stream) {}
  double uniform(double a, double b) { return a + (b - a) * rng_.uniform(stream_, next_++); }
  int integer(int lo, int hi) {
    return std::min(hi, lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1)));
  }
  Complex phase(double magnitude) { return std::polar(magnitude, uniform(0.0, kTwoPi)); }

 private:
  const CounterRng& rng_;
  std::uint64_t stream_;
  std::uint32_t next_ = 0;
};

}  // namespace

double CorpusFunction::envelope(double t) const {
  if (t <= t_on || t >= t_off) return 0.0;
  const double s = std::sin(std::numbers::pi * (t - t_on) / (t_off - t_on));
  return s * s;
}

Complex CorpusFunction::value(int channel, double t, std::span<const double> x) const {
  const double env = envelope(t);
  if (env == 0.0) return {};
  Complex acc{};
  for (const auto& b : bumps) {
    if (b.channel != channel) continue;
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (x[a] - b.center[a]) * (x[a] - b.center[a]);
    acc += b.amplitude * std::exp(-0.5 * r2 / (b.sigma * b.sigma));
  }
  for (const auto& m : modes) {
    if (m.channel != channel) continue;
    double phase = m.omega * t;
    for (int a = 0; a < d; ++a) phase += kTwoPi * m.k[a] / L * x[a];
    acc += m.amplitude * std::polar(1.0, phase);
  }
  return env * acc;
}

SpaceTimeField CorpusFunction::sample(const SpaceGrid& grid, double t0, double dt,
                                      int nt) const {
  if (grid.d != d) throw std::invalid_argument("CorpusFunction: grid dimension mismatch");
  auto f = SpaceTimeField::zeros(grid, channels, t0, dt, nt);
  std::vector<double> x(d);
  for (int i = 0; i < nt; ++i) {
    const double t = f.time(i);
    if (envelope(t) == 0.0) continue;
    for (int k = 0; k < channels; ++k) {
      auto ch = f.slices[i].channel(k);
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        grid.point(idx, x);
        ch[idx] = value(k, t, x);
      }
    }
  }
  return f;
}

std::vector<CorpusFunction> make_corpus(const CorpusSpec& spec, int d, double t0, double dt,
                                        int nt) {
  if (spec.count < 0 || spec.channels < 1) throw std::invalid_argument("make_corpus: bad spec");
  if (d < 1 || d > 3) throw std::invalid_argument("make_corpus: d must be 1..3");
  const CounterRng rng(spec.seed);
  const double window = (nt - 1) * dt;
  const int kmax = static_cast<int>(std::floor(kBand * spec.L / kTwoPi));

  std::vector<CorpusFunction> corpus;
  corpus.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    Draws draw(rng, static_cast<std::uint64_t>(i));
    CorpusFunction f;
    f.d = d;
    f.channels = spec.channels;
    f.L = spec.L;
    f.t_on = t0 + window * draw.uniform(0.02, 0.1);
    f.t_off = f.t_on + window * draw.uniform(0.3, 0.6);

    for (int ch = 0; ch < spec.channels; ++ch) {
      const int nb = draw.integer(1, 3);
      for (int b = 0; b < nb; ++b) {
        CorpusBump bump;
        bump.channel = ch;
        bump.amplitude = draw.phase(draw.uniform(0.5, 1.5));
        for (int a = 0; a < d; ++a) bump.center[a] = draw.uniform(-3.0, 3.0);
        bump.sigma = draw.uniform(0.8, 1.5);
        f.bumps.push_back(bump);
      }
      for (int m = 0; m < 2 && kmax > 0; ++m) {
        CorpusMode mode;
        mode.channel = ch;
        mode.amplitude = draw.phase(draw.uniform(0.1, 0.4));
        mode.omega = draw.uniform(-10.0, 10.0);
        // Rejection-sample a nonzero wave index inside the band.
        while (true) {
          double r2 = 0.0;
          bool nonzero = false;
          for (int a = 0; a < d; ++a) {
            mode.k[a] = draw.integer(-kmax, kmax);
            r2 += mode.k[a] * mode.k[a];
            nonzero = nonzero || mode.k[a] != 0;
          }
          if (nonzero && kTwoPi * std::sqrt(r2) / spec.L <= kBand) break;
        }
        f.modes.push_back(mode);
      }
    }
    corpus.push_back(std::move(f));
  }
  return corpus;
}

}  // namespace paleyscope
