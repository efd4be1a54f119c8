#include "paleyscope/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paleyscope/parallel.hpp"
#include "paleyscope/squarefn.hpp"

namespace paleyscope {
namespace {

struct BallRow {
  std::array<int, 2> lead{};  // offsets along axes 0..d-2
  int half_width = 0;         // along the last axis
};

std::vector<BallRow> ball_rows(int d, int m) {
  const double r2 = (m + 0.5) * (m + 0.5);
  std::vector<BallRow> rows;
  if (d == 1) {
    rows.push_back({{0, 0}, m});
    return rows;
  }
  const int span0 = m;
  const int span1 = d == 3 ? m : 0;
  for (int a = -span0; a <= span0; ++a) {
    for (int b = -span1; b <= span1; ++b) {
      const double rest = r2 - a * a - b * b;
      if (rest < 0.0) continue;
      rows.push_back({{a, b}, static_cast<int>(std::floor(std::sqrt(rest)))});
    }
  }
  return rows;
}

// Offsets with |delta| < rc in cell units, or the whole torus.
std::vector<std::array<int, 3>> ball_offsets(const SpaceGrid& grid, double rc, bool whole) {
  std::vector<std::array<int, 3>> out;
  const int n = grid.n;
  const int lo = whole ? -(n / 2) : -static_cast<int>(std::ceil(rc));
  const int hi = whole ? n / 2 - 1 : static_cast<int>(std::ceil(rc));
  const int d = grid.d;
  for (int a = lo; a <= hi; ++a) {
    for (int b = (d >= 2 ? lo : 0); b <= (d >= 2 ? hi : 0); ++b) {
      for (int c = (d >= 3 ? lo : 0); c <= (d >= 3 ? hi : 0); ++c) {
        const double r2 = double(a) * a + double(b) * b + double(c) * c;
        if (whole || r2 < rc * rc || r2 == 0.0) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<int> radius_ladder(int max_m, RadiusLadder ladder) {
  std::vector<int> out;
  if (max_m < 0) return out;
  out.push_back(0);
  if (ladder == RadiusLadder::full) {
    for (int m = 1; m <= max_m; ++m) out.push_back(m);
  } else {
    for (int m = 1; m <= max_m; m *= 2) out.push_back(m);
    if (out.back() != max_m) out.push_back(max_m);
  }
  return out;
}

std::vector<double> maximal_space(const SpaceGrid& grid, std::span<const double> f,
                                  RadiusLadder ladder) {
  if (f.size() != grid.size()) throw std::invalid_argument("maximal_space: size mismatch");
  const int n = grid.n;
  const int d = grid.d;
  const std::size_t lines = grid.size() / n;

  // Periodic prefix sums along the last axis, covering indices [-n, 2n).
  std::vector<double> prefix(lines * (3 * n + 1), 0.0);
  for (std::size_t l = 0; l < lines; ++l) {
    double* P = prefix.data() + l * (3 * n + 1);
    const double* row = f.data() + l * n;
    for (int k = 0; k < 3 * n; ++k) P[k + 1] = P[k] + row[k % n];
  }

  std::vector<double> out(f.begin(), f.end());
  for (int m : radius_ladder(n / 2 - 1, ladder)) {
    const auto rows = ball_rows(d, m);
    double count = 0.0;
    for (const auto& r : rows) count += 2 * r.half_width + 1;
    parallel_for(grid.size(), [&](std::size_t idx) {
      const auto c = grid.unravel(idx);
      const int last = c[d - 1];
      double acc = 0.0;
      for (const auto& r : rows) {
        std::size_t line = 0;
        for (int a = 0; a < d - 1; ++a) {
          line = line * n + static_cast<std::size_t>(((c[a] + r.lead[a]) % n + n) % n);
        }
        const double* P = prefix.data() + line * (3 * n + 1);
        acc += P[last + r.half_width + n + 1] - P[last - r.half_width + n];
      }
      out[idx] = std::max(out[idx], acc / count);
    });
  }
  return out;
}

ScalarSpaceTime maximal_space(const ScalarSpaceTime& g, RadiusLadder ladder) {
  auto out = g;
  for (int i = 0; i < g.nt; ++i) {
    const auto m = maximal_space(g.grid, g.slice(i), ladder);
    std::copy(m.begin(), m.end(), out.slice(i).begin());
  }
  return out;
}

ScalarSpaceTime maximal_time(const ScalarSpaceTime& g, RadiusLadder ladder) {
  auto out = g;
  const std::size_t N = g.grid.size();
  const int nt = g.nt;
  const auto radii = radius_ladder(nt - 1, ladder);
  parallel_for(N, [&](std::size_t idx) {
    std::vector<double> P(nt + 1, 0.0);
    for (int i = 0; i < nt; ++i) P[i + 1] = P[i] + g.at(i, idx);
    for (int i = 0; i < nt; ++i) {
      double best = g.at(i, idx);
      for (int m : radii) {
        const int a = std::max(0, i - m);
        const int b = std::min(nt - 1, i + m);
        best = std::max(best, (P[b + 1] - P[a]) / (2 * m + 1));
      }
      out.at(i, idx) = best;
    }
  });
  return out;
}

ScalarSpaceTime sharp_function(const ScalarSpaceTime& g, double delta0,
                               const SharpOptions& options) {
  if (!(delta0 > 0.0)) throw std::invalid_argument("sharp_function: delta0 must be positive");
  const SpaceGrid& grid = g.grid;
  const int n = grid.n;
  const int d = grid.d;
  const int nt = g.nt;
  auto out = ScalarSpaceTime::zeros(grid, g.t0, g.dt, nt);

  std::vector<std::size_t> members;
  for (int k = 0;; ++k) {
    const int wt = (1 << k) - 1;
    const double R = g.dt * (1 << k);
    const double rho = std::pow(R, delta0);
    const bool whole = rho >= 0.5 * grid.L;
    const double rc = rho / grid.h();
    const auto offsets = ball_offsets(grid, rc, whole);

    const int tstride = options.full_centers ? 1 : std::max(1, (2 * wt + 1) / 2);
    const int sstride = options.full_centers ? 1 : (whole ? n : std::max(1, static_cast<int>(rc)));

    std::vector<int> axis_centres;
    for (int c = 0; c < n; c += sstride) axis_centres.push_back(c);
    const std::size_t per_axis = axis_centres.size();
    std::size_t space_centres = 1;
    for (int a = 0; a < d; ++a) space_centres *= per_axis;

    std::vector<std::size_t> ball(offsets.size());
    for (std::size_t sc = 0; sc < space_centres; ++sc) {
      std::array<int, 3> centre{};
      std::size_t rem = sc;
      for (int a = d - 1; a >= 0; --a) {
        centre[a] = axis_centres[rem % per_axis];
        rem /= per_axis;
      }
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        int p[3];
        for (int a = 0; a < d; ++a) p[a] = centre[a] + offsets[o][a];
        ball[o] = grid.ravel(std::span<const int>(p, d));
      }
      for (int tc = 0; tc < nt; tc += tstride) {
        const int t_lo = std::max(0, tc - wt);
        const int t_hi = std::min(nt - 1, tc + wt);
        double sum = 0.0;
        for (int i = t_lo; i <= t_hi; ++i) {
          for (std::size_t idx : ball) sum += g.at(i, idx);
        }
        const double count = static_cast<double>((t_hi - t_lo + 1) * ball.size());
        const double mean = sum / count;
        double dev = 0.0;
        for (int i = t_lo; i <= t_hi; ++i) {
          for (std::size_t idx : ball) dev += std::abs(g.at(i, idx) - mean);
        }
        const double osc = dev / count;
        for (int i = t_lo; i <= t_hi; ++i) {
          for (std::size_t idx : ball) out.at(i, idx) = std::max(out.at(i, idx), osc);
        }
      }
    }
    if (wt >= nt - 1) break;
  }
  return out;
}

double verify_sharp_bound(const Symbol& sym, double eta, const SpaceTimeField& f,
                          double delta0, const SharpOptions& options) {
  const auto G = square_function(sym, eta, f);
  const auto sharp = sharp_function(G, delta0, options);
  const auto energy = channel_energy(f);
  const auto majorant = maximal_time(maximal_space(energy));
  double worst = 0.0;
  for (std::size_t i = 0; i < sharp.values.size(); ++i) {
    const double num = sharp.values[i];
    const double den = std::sqrt(majorant.values[i]);
    if (num == 0.0) continue;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, num / den);
  }
  return worst;
}

FeffermanSteinResult fefferman_stein_check(const ScalarSpaceTime& h, double p, double delta0,
                                           const SharpOptions& options) {
  if (!(p > 1.0)) throw std::invalid_argument("fefferman_stein_check: p must be > 1");
  auto centred = h;
  double mean = 0.0;
  for (double v : h.values) mean += v;
  mean /= static_cast<double>(h.values.size());
  bool constant = true;
  for (double& v : centred.values) {
    v -= mean;
    constant = constant && std::abs(v) <= 1e-14 * std::max(1.0, std::abs(mean));
  }
  FeffermanSteinResult res;
  if (constant) {
    res.degenerate = true;
    res.ratio = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  const auto sharp = sharp_function(centred, delta0, options);
  const double num = lp_space_time_norm(centred, p);
  const double den = lp_space_time_norm(sharp, p);
  if (den == 0.0) {
    res.degenerate = true;
    res.ratio = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.ratio = num / den;
  return res;
}

}  // namespace paleyscope
