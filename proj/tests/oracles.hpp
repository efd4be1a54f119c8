#pragma once

// Slow reference implementations used as test oracles. Nothing here calls
// into the transform or maximal-function code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

inline double node(int j, int n, double L) { return -0.5 * L + j * L / n; }
inline int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }
inline double frequency(int k, int n, double L) { return 2.0 * kPi * signed_index(k, n) / L; }

/// h sum_j f(x_j) e^{-i x_j xi_k}, one dimension, FFT-ordered output.
inline std::vector<Complex> forward_dft(const std::vector<Complex>& f, double L) {
  const int n = static_cast<int>(f.size());
  const double h = L / n;
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) {
    Complex acc{};
    for (int j = 0; j < n; ++j) acc += f[j] * std::polar(1.0, -node(j, n, L) * frequency(k, n, L));
    out[k] = h * acc;
  }
  return out;
}

/// L^{-1} sum_k F(xi_k) e^{i x_j xi_k}.
inline std::vector<Complex> inverse_dft(const std::vector<Complex>& F, double L) {
  const int n = static_cast<int>(F.size());
  std::vector<Complex> out(n);
  for (int j = 0; j < n; ++j) {
    Complex acc{};
    for (int k = 0; k < n; ++k) acc += F[k] * std::polar(1.0, node(j, n, L) * frequency(k, n, L));
    out[j] = acc / L;
  }
  return out;
}

/// Heat kernel on the circle of length L: (4 pi t)^{-1/2} sum_k exp(-(x + kL)^2 / 4t).
inline double periodized_gaussian(double x, double t, double L, int images = 8) {
  double acc = 0.0;
  for (int k = -images; k <= images; ++k) {
    const double y = x + k * L;
    acc += std::exp(-y * y / (4.0 * t));
  }
  return acc / std::sqrt(4.0 * kPi * t);
}

/// Centred periodic 1-d maximal function over every radius m <= n/2 - 1.
inline std::vector<double> maximal_1d(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double best = f[i];
    for (int m = 0; m <= n / 2 - 1; ++m) {
      double s = 0.0;
      for (int o = -m; o <= m; ++o) s += f[((i + o) % n + n) % n];
      best = std::max(best, s / (2 * m + 1));
    }
    out[i] = best;
  }
  return out;
}

/// Continuum centred maximal function of the indicator of [0, 1] at x.
inline double indicator_maximal(double x) {
  if (x >= 0.0 && x <= 1.0) return 1.0;
  const double dist_far = x > 1.0 ? x : 1.0 - x;  // radius reaching the far end
  return 1.0 / (2.0 * dist_far);
}

/// Brute-force parabolic sharp function in one space dimension. Every grid
/// point is a cylinder centre; rungs R = dt 2^k with time half-width 2^k - 1
/// and space radius R^delta0 (whole circle once it reaches L/2).
/// g is slice-major, nt x n.
inline std::vector<double> sharp_1d(const std::vector<double>& g, int n, int nt, double L,
                                    double dt, double delta0) {
  const double h = L / n;
  std::vector<double> out(g.size(), 0.0);
  for (int k = 0;; ++k) {
    const int wt = (1 << k) - 1;
    const double rho = std::pow(dt * (1 << k), delta0);
    std::vector<int> offsets;
    if (rho >= 0.5 * L) {
      for (int o = -(n / 2); o <= n / 2 - 1; ++o) offsets.push_back(o);
    } else {
      for (int o = -n; o <= n; ++o) {
        if (o == 0 || std::abs(o) * h < rho) offsets.push_back(o);
      }
    }
    for (int tc = 0; tc < nt; ++tc) {
      const int lo = std::max(0, tc - wt);
      const int hi = std::min(nt - 1, tc + wt);
      for (int xc = 0; xc < n; ++xc) {
        double sum = 0.0;
        int count = 0;
        for (int i = lo; i <= hi; ++i) {
          for (int o : offsets) {
            sum += g[i * n + ((xc + o) % n + n) % n];
            ++count;
          }
        }
        const double mean = sum / count;
        double dev = 0.0;
        for (int i = lo; i <= hi; ++i) {
          for (int o : offsets) dev += std::abs(g[i * n + ((xc + o) % n + n) % n] - mean);
        }
        const double osc = dev / count;
        for (int i = lo; i <= hi; ++i) {
          for (int o : offsets) {
            double& v = out[i * n + ((xc + o) % n + n) % n];
            v = std::max(v, osc);
          }
        }
      }
    }
    if (wt >= nt - 1) break;
  }
  return out;
}

}  // namespace oracle
