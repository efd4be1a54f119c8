#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace paleyscope {

using Complex = std::complex<double>;

/// Piecewise-constant function of time. Segment i covers
/// [starts[i], starts[i+1]); the first segment also covers (-inf, starts[0])
/// and the last one extends to +inf, so evaluation outside the table clamps.
template <class T>
class PiecewiseConstant {
 public:
  PiecewiseConstant(std::vector<double> starts, std::vector<T> values)
      : starts_(std::move(starts)), values_(std::move(values)) {
    if (starts_.empty() || starts_.size() != values_.size()) {
      throw std::invalid_argument(
          "PiecewiseConstant: need one value per breakpoint");
    }
    if (!std::is_sorted(starts_.begin(), starts_.end(),
                        [](double a, double b) { return a <= b; })) {
      throw std::invalid_argument(
          "PiecewiseConstant: breakpoints must be strictly increasing");
    }
  }

  static PiecewiseConstant constant(T value) { return {{0.0}, {value}}; }

  std::size_t segment(double t) const {
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    return it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
  }

  const T& at(double t) const { return values_[segment(t)]; }

  /// Exact integral over [s, t]; requires s <= t.
  T integral(double s, double t) const {
    T acc{};
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double lo = i == 0 ? s : std::max(s, starts_[i]);
      const double hi = i + 1 == values_.size() ? t : std::min(t, starts_[i + 1]);
      if (hi > lo) acc += values_[i] * (hi - lo);
    }
    return acc;
  }

  bool is_constant() const {
    return std::all_of(values_.begin(), values_.end(),
                       [&](const T& v) { return v == values_.front(); });
  }

  std::span<const double> starts() const { return starts_; }
  std::span<const T> values() const { return values_; }

 private:
  std::vector<double> starts_;
  std::vector<T> values_;
};

using TimeCoefficient = PiecewiseConstant<Complex>;

/// psi(t, xi) = -a(t) |xi|^gamma.
class FractionalSymbol {
 public:
  FractionalSymbol(double gamma, TimeCoefficient a, double nu);

  double gamma() const { return gamma_; }
  double nu() const { return nu_; }
  const TimeCoefficient& coefficient() const { return a_; }

  double order() const { return gamma_; }
  int dimension() const { return 0; }  // any
  Complex eval(double t, std::span<const double> xi) const;
  Complex time_integral(double s, double t, std::span<const double> xi) const;
  std::vector<double> breakpoints() const;
  bool time_independent() const { return a_.is_constant(); }

 private:
  double gamma_;
  TimeCoefficient a_;
  double nu_;
};

using MultiIndex = std::vector<int>;

struct PolyTerm {
  MultiIndex alpha;
  MultiIndex beta;
  TimeCoefficient a;
};

/// Symbol of (-1)^{m-1} sum a^{alpha beta}(t) D^{alpha+beta}, which is
/// -sum a^{alpha beta}(t) xi^{alpha+beta}.
class PolyFormSymbol {
 public:
  PolyFormSymbol(int d, int m, std::vector<PolyTerm> terms, double nu);

  int half_order() const { return m_; }
  double nu() const { return nu_; }
  std::span<const PolyTerm> terms() const { return terms_; }

  double order() const { return 2.0 * m_; }
  int dimension() const { return d_; }
  Complex eval(double t, std::span<const double> xi) const;
  Complex time_integral(double s, double t, std::span<const double> xi) const;
  std::vector<double> breakpoints() const;
  bool time_independent() const;

 private:
  int d_;
  int m_;
  std::vector<PolyTerm> terms_;
  double nu_;
};

struct LevyParams {
  int d = 1;
  int k = 0;
  double gamma = 0.5;
  double c1 = 1.0;
  double c2 = 1.0;
  double N0 = 1.0;
  int sphere_nodes = 256;  // d = 2 only; d = 1 always uses {-1, 1}
};

/// Symbol of (-Delta)^k L_0(t) with a homogeneous jump density m(t, w)
/// tabulated on sphere quadrature nodes:
///   psi = -c1 |xi|^{2k} sum_j weight_j |(w_j,xi)|^gamma [1 - i phi(w_j,xi)] m(t,w_j).
class LevySymbol {
 public:
  using Density = std::function<double(double t, std::span<const double> w)>;

  /// density[segment][node], segments starting at `starts`.
  LevySymbol(LevyParams params, std::vector<double> starts,
             std::vector<std::vector<double>> density);

  /// Tabulates `m` at each segment start and sphere node.
  static LevySymbol from_density(LevyParams params, std::vector<double> starts,
                                 const Density& m);

  const LevyParams& params() const { return params_; }
  std::size_t node_count() const { return weights_.size(); }
  std::span<const double> node(std::size_t j) const;
  double weight(std::size_t j) const { return weights_[j]; }
  double density(double t, std::size_t j) const;

  double order() const { return 2.0 * params_.k + params_.gamma; }
  int dimension() const { return params_.d; }
  Complex eval(double t, std::span<const double> xi) const;
  Complex time_integral(double s, double t, std::span<const double> xi) const;
  std::vector<double> breakpoints() const;
  bool time_independent() const;

 private:
  Complex node_term(std::size_t j, std::span<const double> xi) const;

  LevyParams params_;
  std::vector<double> nodes_;    // node_count x d, row-major
  std::vector<double> weights_;
  std::vector<PiecewiseConstant<double>> density_;  // one per node
};

using Symbol = std::variant<FractionalSymbol, PolyFormSymbol, LevySymbol>;

std::string family_name(const Symbol& sym);

/// Order of the symbol: gamma, 2m, or 2k + gamma.
double symbol_order(const Symbol& sym);

/// Spatial dimension the symbol is tied to; 0 when any dimension works.
int symbol_dimension(const Symbol& sym);

/// Ellipticity constant nu carried by the symbol (Levy: N0).
double symbol_nu(const Symbol& sym);

bool is_time_independent(const Symbol& sym);

/// Union of coefficient breakpoints, sorted.
std::vector<double> symbol_breakpoints(const Symbol& sym);

Complex eval_symbol(const Symbol& sym, double t, std::span<const double> xi);

/// Exact integral of psi(r, xi) over r in [s, t].
Complex symbol_time_integral(const Symbol& sym, double s, double t,
                             std::span<const double> xi);

struct DerivativeBound {
  MultiIndex alpha;
  double observed = 0.0;  // sup |D^alpha psi| |xi|^{|alpha| - gamma}
};

struct EllipticityReport {
  double nu_requested = 0.0;
  double nu_observed = 0.0;  // inf of -Re psi / |xi|^gamma over samples
  std::vector<DerivativeBound> derivative_bounds;
  bool a1_pass = false;
  bool a2_pass = false;

  bool pass() const { return a1_pass && a2_pass; }
};

/// Samples (A1) Re psi <= -nu |xi|^gamma and (A2) |D^alpha psi| <= nu^{-1}
/// |xi|^{gamma-|alpha|} for |alpha| <= floor(d/2)+2, using central differences
/// with step 1e-3 |xi|.
EllipticityReport check_ellipticity(const Symbol& sym, double nu,
                                    const std::vector<std::vector<double>>& xi_samples,
                                    const std::vector<double>& t_samples);

/// Quadrature value of the integral of w m(t, w) over the unit sphere.
/// Only meaningful for gamma = 1.
std::vector<double> check_levy_cancellation(const LevySymbol& sym, double t);

struct LevyLowerBoundReport {
  double sup_re_psi = 0.0;
  bool pass = false;
};

/// Samples sup over coefficient segments and unit xi of Re psi and compares
/// against -N0.
LevyLowerBoundReport check_levy_lower_bound(const LevySymbol& sym,
                                            int directions = 360);

/// Unit vectors used for sampling in dimension d (d = 1: {+1, -1}).
std::vector<std::vector<double>> unit_directions(int d, int count);

}  // namespace paleyscope
