#include "paleyscope/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace paleyscope {

QuadratureResult romberg(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, int max_levels) {
  if (!(b >= a)) throw std::invalid_argument("romberg: requires a <= b");
  QuadratureResult out;
  if (b == a) {
    out.converged = true;
    return out;
  }
  std::vector<double> prev, row;
  double h = b - a;
  double trap = 0.5 * h * (f(a) + f(b));
  out.evaluations = 2;
  prev.push_back(trap);
  for (int level = 1; level < max_levels; ++level) {
    const int fresh = 1 << (level - 1);
    double sum = 0.0;
    for (int i = 0; i < fresh; ++i) sum += f(a + (2 * i + 1) * 0.5 * h);
    out.evaluations += fresh;
    h *= 0.5;
    trap = 0.5 * trap + h * sum;

    row.assign(1, trap);
    double factor = 1.0;
    for (int k = 1; k <= level; ++k) {
      factor *= 4.0;
      row.push_back(row[k - 1] + (row[k - 1] - prev[k - 1]) / (factor - 1.0));
    }
    out.value = row.back();
    out.error = std::abs(row.back() - prev.back());
    if (!std::isfinite(out.value)) return out;
    if (level >= 4 && out.error <= rel_tol * std::abs(out.value)) {
      out.converged = true;
      return out;
    }
    if (level >= 4 && out.value == 0.0 && out.error == 0.0) {
      out.converged = true;
      return out;
    }
    prev.swap(row);
  }
  return out;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double tau0, double rel_tol, int max_blocks) {
  if (!(tau0 > 0.0)) throw std::invalid_argument("integrate_to_infinity: tau0 must be > 0");
  QuadratureResult out;
  double lo = a;
  double len = tau0;
  int quiet = 0;
  bool blocks_ok = true;
  for (int k = 0; k < max_blocks; ++k) {
    const auto block = romberg(f, lo, lo + len, rel_tol);
    out.evaluations += block.evaluations;
    out.error += block.error;
    blocks_ok = blocks_ok && block.converged;
    out.value += block.value;
    if (!std::isfinite(out.value)) return out;
    if (std::abs(block.value) <= rel_tol * std::abs(out.value) ||
        (out.value == 0.0 && block.value == 0.0)) {
      if (++quiet == 2) {
        out.converged = blocks_ok;
        return out;
      }
    } else {
      quiet = 0;
    }
    lo += len;
    len *= 2.0;
  }
  return out;
}

}  // namespace paleyscope
