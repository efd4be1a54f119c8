#include "paleyscope/symbols.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace paleyscope {
namespace {

double norm2(std::span<const double> xi) {
  double acc = 0.0;
  for (double v : xi) acc += v * v;
  return std::sqrt(acc);
}

void require_finite(double t, std::span<const double> xi) {
  if (!std::isfinite(t)) throw std::invalid_argument("symbol: non-finite time");
  for (double v : xi) {
    if (!std::isfinite(v)) throw std::invalid_argument("symbol: non-finite frequency");
  }
}

void require_interval(double s, double t) {
  if (s > t) throw std::invalid_argument("symbol_time_integral: requires s <= t");
}

double monomial(std::span<const double> xi, const MultiIndex& a, const MultiIndex& b) {
  double acc = 1.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const int power = a[i] + b[i];
    for (int p = 0; p < power; ++p) acc *= xi[i];
  }
  return acc;
}

int index_sum(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

}  // namespace

std::vector<std::vector<double>> unit_directions(int d, int count) {
  std::vector<std::vector<double>> out;
  if (d == 1) return {{1.0}, {-1.0}};
  if (d == 2) {
    for (int j = 0; j < count; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / count;
      out.push_back({std::cos(theta), std::sin(theta)});
    }
    return out;
  }
  if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      out.push_back({r * std::cos(golden * j), r * std::sin(golden * j), z});
    }
    return out;
  }
  throw std::invalid_argument("unit_directions: dimension must be 1, 2 or 3");
}

// ---------------------------------------------------------------- fractional

FractionalSymbol::FractionalSymbol(double gamma, TimeCoefficient a, double nu)
    : gamma_(gamma), a_(std::move(a)), nu_(nu) {
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw std::invalid_argument("FractionalSymbol: gamma must be positive");
  }
  if (!(nu_ > 0.0)) throw std::invalid_argument("FractionalSymbol: nu must be positive");
  for (const Complex& v : a_.values()) {
    if (!(nu_ < v.real() && v.real() < 1.0 / nu_)) {
      throw std::invalid_argument("FractionalSymbol: need nu < Re a(t) < 1/nu");
    }
  }
}

Complex FractionalSymbol::eval(double t, std::span<const double> xi) const {
  require_finite(t, xi);
  return -a_.at(t) * std::pow(norm2(xi), gamma_);
}

Complex FractionalSymbol::time_integral(double s, double t,
                                        std::span<const double> xi) const {
  require_finite(s, xi);
  require_finite(t, xi);
  require_interval(s, t);
  if (s == t) return {};
  return -a_.integral(s, t) * std::pow(norm2(xi), gamma_);
}

std::vector<double> FractionalSymbol::breakpoints() const {
  return {a_.starts().begin(), a_.starts().end()};
}

// ------------------------------------------------------------------ polyform

PolyFormSymbol::PolyFormSymbol(int d, int m, std::vector<PolyTerm> terms, double nu)
    : d_(d), m_(m), terms_(std::move(terms)), nu_(nu) {
  if (d_ < 1 || d_ > 3) throw std::invalid_argument("PolyFormSymbol: d must be 1..3");
  if (m_ < 1) throw std::invalid_argument("PolyFormSymbol: m must be positive");
  if (!(nu_ > 0.0)) throw std::invalid_argument("PolyFormSymbol: nu must be positive");
  if (terms_.empty()) throw std::invalid_argument("PolyFormSymbol: no coefficients");
  for (const auto& term : terms_) {
    if (static_cast<int>(term.alpha.size()) != d_ ||
        static_cast<int>(term.beta.size()) != d_) {
      throw std::invalid_argument("PolyFormSymbol: multi-index length must equal d");
    }
    if (index_sum(term.alpha) != m_ || index_sum(term.beta) != m_) {
      throw std::invalid_argument("PolyFormSymbol: need |alpha| = |beta| = m");
    }
    for (int v : term.alpha) {
      if (v < 0) throw std::invalid_argument("PolyFormSymbol: negative multi-index");
    }
    for (int v : term.beta) {
      if (v < 0) throw std::invalid_argument("PolyFormSymbol: negative multi-index");
    }
  }

  // Ellipticity on sampled unit vectors at every coefficient segment.
  const auto dirs = unit_directions(d_, d_ == 1 ? 2 : 64);
  for (double t : breakpoints()) {
    for (const auto& w : dirs) {
      double form = 0.0;
      for (const auto& term : terms_) {
        form += term.a.at(t).real() * monomial(w, term.alpha, term.beta);
      }
      if (form < nu_ * (1.0 - 1e-12) || form > (1.0 + 1e-12) / nu_) {
        throw std::invalid_argument(
            "PolyFormSymbol: ellipticity nu|xi|^2m <= form <= |xi|^2m/nu violated");
      }
    }
  }
}

Complex PolyFormSymbol::eval(double t, std::span<const double> xi) const {
  require_finite(t, xi);
  Complex acc{};
  for (const auto& term : terms_) acc += term.a.at(t) * monomial(xi, term.alpha, term.beta);
  return -acc;
}

Complex PolyFormSymbol::time_integral(double s, double t,
                                      std::span<const double> xi) const {
  require_finite(s, xi);
  require_finite(t, xi);
  require_interval(s, t);
  if (s == t) return {};
  Complex acc{};
  for (const auto& term : terms_) {
    acc += term.a.integral(s, t) * monomial(xi, term.alpha, term.beta);
  }
  return -acc;
}

std::vector<double> PolyFormSymbol::breakpoints() const {
  std::set<double> all;
  for (const auto& term : terms_) all.insert(term.a.starts().begin(), term.a.starts().end());
  return {all.begin(), all.end()};
}

bool PolyFormSymbol::time_independent() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const PolyTerm& term) { return term.a.is_constant(); });
}

// ---------------------------------------------------------------------- levy

LevySymbol::LevySymbol(LevyParams params, std::vector<double> starts,
                       std::vector<std::vector<double>> density)
    : params_(params) {
  if (params_.d != 1 && params_.d != 2) {
    throw std::invalid_argument("LevySymbol: only d = 1 and d = 2 are supported");
  }
  if (params_.k < 0) throw std::invalid_argument("LevySymbol: k must be nonnegative");
  if (!(params_.gamma > 0.0 && params_.gamma < 2.0)) {
    throw std::invalid_argument("LevySymbol: gamma must lie in (0, 2)");
  }
  if (!(params_.c1 > 0.0) || !(params_.c2 > 0.0) || !(params_.N0 > 0.0)) {
    throw std::invalid_argument("LevySymbol: c1, c2, N0 must be positive");
  }

  if (params_.d == 1) {
    nodes_ = {-1.0, 1.0};
    weights_ = {1.0, 1.0};
  } else {
    if (params_.sphere_nodes < 4) {
      throw std::invalid_argument("LevySymbol: need at least 4 circle nodes");
    }
    for (const auto& w : unit_directions(2, params_.sphere_nodes)) {
      nodes_.insert(nodes_.end(), w.begin(), w.end());
    }
    weights_.assign(params_.sphere_nodes, 2.0 * std::numbers::pi / params_.sphere_nodes);
  }

  if (density.size() != starts.size()) {
    throw std::invalid_argument("LevySymbol: one density row per breakpoint");
  }
  for (const auto& row : density) {
    if (row.size() != weights_.size()) {
      throw std::invalid_argument("LevySymbol: density row length must equal node count");
    }
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("LevySymbol: density must be finite and nonnegative");
      }
    }
  }
  density_.reserve(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    std::vector<double> column;
    column.reserve(density.size());
    for (const auto& row : density) column.push_back(row[j]);
    density_.emplace_back(starts, std::move(column));
  }
}

LevySymbol LevySymbol::from_density(LevyParams params, std::vector<double> starts,
                                    const Density& m) {
  // Build once with a placeholder to obtain the node layout.
  const std::size_t count = params.d == 1 ? 2 : static_cast<std::size_t>(params.sphere_nodes);
  LevySymbol layout(params, {0.0}, {std::vector<double>(count, 1.0)});
  std::vector<std::vector<double>> table;
  for (double t : starts) {
    std::vector<double> row(count);
    for (std::size_t j = 0; j < count; ++j) row[j] = m(t, layout.node(j));
    table.push_back(std::move(row));
  }
  return LevySymbol(params, std::move(starts), std::move(table));
}

std::span<const double> LevySymbol::node(std::size_t j) const {
  return std::span<const double>(nodes_).subspan(j * params_.d, params_.d);
}

double LevySymbol::density(double t, std::size_t j) const { return density_[j].at(t); }

Complex LevySymbol::node_term(std::size_t j, std::span<const double> xi) const {
  const auto w = node(j);
  double z = 0.0;
  for (int i = 0; i < params_.d; ++i) z += w[i] * xi[i];
  if (z == 0.0) return {};  // 0 * ln|0| := 0
  const double az = std::abs(z);
  const double sign = z > 0.0 ? 1.0 : -1.0;
  double phi;
  if (params_.gamma == 1.0) {
    phi = -(2.0 / std::numbers::pi) * sign * std::log(az);
  } else {
    phi = params_.c2 * sign;
  }
  return weights_[j] * std::pow(az, params_.gamma) * Complex(1.0, -phi);
}

Complex LevySymbol::eval(double t, std::span<const double> xi) const {
  require_finite(t, xi);
  if (static_cast<int>(xi.size()) != params_.d) {
    throw std::invalid_argument("LevySymbol: frequency dimension mismatch");
  }
  Complex acc{};
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const double m = density_[j].at(t);
    if (m != 0.0) acc += node_term(j, xi) * m;
  }
  const double r = norm2(xi);
  return -params_.c1 * std::pow(r, 2.0 * params_.k) * acc;
}

Complex LevySymbol::time_integral(double s, double t, std::span<const double> xi) const {
  require_finite(s, xi);
  require_finite(t, xi);
  require_interval(s, t);
  if (static_cast<int>(xi.size()) != params_.d) {
    throw std::invalid_argument("LevySymbol: frequency dimension mismatch");
  }
  if (s == t) return {};
  Complex acc{};
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const double m = density_[j].integral(s, t);
    if (m != 0.0) acc += node_term(j, xi) * m;
  }
  const double r = norm2(xi);
  return -params_.c1 * std::pow(r, 2.0 * params_.k) * acc;
}

std::vector<double> LevySymbol::breakpoints() const {
  return {density_.front().starts().begin(), density_.front().starts().end()};
}

bool LevySymbol::time_independent() const {
  return std::all_of(density_.begin(), density_.end(),
                     [](const auto& column) { return column.is_constant(); });
}

// ------------------------------------------------------------------- generic

std::string family_name(const Symbol& sym) {
  switch (sym.index()) {
    case 0: return "fractional";
    case 1: return "polyform";
    default: return "levy";
  }
}

double symbol_order(const Symbol& sym) {
  return std::visit([](const auto& s) { return s.order(); }, sym);
}

int symbol_dimension(const Symbol& sym) {
  return std::visit([](const auto& s) { return s.dimension(); }, sym);
}

double symbol_nu(const Symbol& sym) {
  if (const auto* lev = std::get_if<LevySymbol>(&sym)) return lev->params().N0;
  return std::visit(
      [](const auto& s) -> double {
        if constexpr (requires { s.nu(); }) return s.nu();
        return 0.0;
      },
      sym);
}

bool is_time_independent(const Symbol& sym) {
  return std::visit([](const auto& s) { return s.time_independent(); }, sym);
}

std::vector<double> symbol_breakpoints(const Symbol& sym) {
  return std::visit([](const auto& s) { return s.breakpoints(); }, sym);
}

Complex eval_symbol(const Symbol& sym, double t, std::span<const double> xi) {
  return std::visit([&](const auto& s) { return s.eval(t, xi); }, sym);
}

Complex symbol_time_integral(const Symbol& sym, double s, double t,
                             std::span<const double> xi) {
  return std::visit([&](const auto& f) { return f.time_integral(s, t, xi); }, sym);
}

// ------------------------------------------------------------- ellipticity

namespace {

/// Central difference stencil for the k-th derivative: offsets in units of
/// the step and matching weights (before division by step^k).
struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;
};

Stencil central_stencil(int order) {
  Stencil st;
  double binom = 1.0;
  for (int j = 0; j <= order; ++j) {
    st.offsets.push_back(order / 2.0 - j);
    st.weights.push_back(((j % 2) ? -1.0 : 1.0) * binom);
    binom = binom * (order - j) / (j + 1);
  }
  return st;
}

void enumerate_indices(int d, int max_order, MultiIndex& current, int axis,
                       std::vector<MultiIndex>& out) {
  if (axis == d) {
    out.push_back(current);
    return;
  }
  const int used = std::accumulate(current.begin(), current.begin() + axis, 0);
  for (int k = 0; k + used <= max_order; ++k) {
    current[axis] = k;
    enumerate_indices(d, max_order, current, axis + 1, out);
  }
  current[axis] = 0;
}

Complex derivative_estimate(const Symbol& sym, double t, std::span<const double> xi,
                            const MultiIndex& alpha, double step) {
  const int d = static_cast<int>(xi.size());
  std::vector<Stencil> stencils;
  for (int i = 0; i < d; ++i) stencils.push_back(central_stencil(alpha[i]));

  Complex acc{};
  std::vector<std::size_t> pos(d, 0);
  std::vector<double> point(xi.begin(), xi.end());
  while (true) {
    double weight = 1.0;
    for (int i = 0; i < d; ++i) {
      point[i] = xi[i] + stencils[i].offsets[pos[i]] * step;
      weight *= stencils[i].weights[pos[i]];
    }
    acc += weight * eval_symbol(sym, t, point);
    int axis = 0;
    while (axis < d && ++pos[axis] == stencils[axis].offsets.size()) {
      pos[axis] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
  return acc / std::pow(step, total);
}

}  // namespace

EllipticityReport check_ellipticity(const Symbol& sym, double nu,
                                    const std::vector<std::vector<double>>& xi_samples,
                                    const std::vector<double>& t_samples) {
  if (xi_samples.empty() || t_samples.empty()) {
    throw std::invalid_argument("check_ellipticity: samples must be nonempty");
  }
  if (!(nu > 0.0)) throw std::invalid_argument("check_ellipticity: nu must be positive");
  const int d = static_cast<int>(xi_samples.front().size());
  for (const auto& xi : xi_samples) {
    if (static_cast<int>(xi.size()) != d) {
      throw std::invalid_argument("check_ellipticity: mixed sample dimensions");
    }
    if (norm2(xi) == 0.0) throw std::invalid_argument("check_ellipticity: xi = 0 excluded");
  }

  const double gamma = symbol_order(sym);
  const int max_order = d / 2 + 2;
  std::vector<MultiIndex> indices;
  MultiIndex scratch(d, 0);
  enumerate_indices(d, max_order, scratch, 0, indices);

  EllipticityReport report;
  report.nu_requested = nu;
  report.nu_observed = std::numeric_limits<double>::infinity();
  for (const auto& alpha : indices) report.derivative_bounds.push_back({alpha, 0.0});

  for (double t : t_samples) {
    for (const auto& xi : xi_samples) {
      const double r = norm2(xi);
      const Complex psi = eval_symbol(sym, t, xi);
      report.nu_observed = std::min(report.nu_observed, -psi.real() / std::pow(r, gamma));
      for (auto& bound : report.derivative_bounds) {
        const int order = std::accumulate(bound.alpha.begin(), bound.alpha.end(), 0);
        const Complex deriv =
            order == 0 ? psi : derivative_estimate(sym, t, xi, bound.alpha, 1e-3 * r);
        const double scaled = std::abs(deriv) * std::pow(r, order - gamma);
        bound.observed = std::max(bound.observed, scaled);
      }
    }
  }

  // Comparison slack: 1e-12 for the exact (A1) ratio, 1e-6 for the O(step^2)
  // finite-difference estimates.
  report.a1_pass = report.nu_observed >= nu * (1.0 - 1e-12);
  report.a2_pass = std::all_of(
      report.derivative_bounds.begin(), report.derivative_bounds.end(),
      [&](const DerivativeBound& b) {
        return std::isfinite(b.observed) && b.observed <= (1.0 + 1e-6) / nu;
      });
  return report;
}

std::vector<double> check_levy_cancellation(const LevySymbol& sym, double t) {
  if (sym.params().gamma != 1.0) {
    throw std::invalid_argument("check_levy_cancellation: requires gamma = 1");
  }
  const int d = sym.params().d;
  std::vector<double> acc(d, 0.0);
  for (std::size_t j = 0; j < sym.node_count(); ++j) {
    const auto w = sym.node(j);
    const double mass = sym.weight(j) * sym.density(t, j);
    for (int i = 0; i < d; ++i) acc[i] += w[i] * mass;
  }
  return acc;
}

LevyLowerBoundReport check_levy_lower_bound(const LevySymbol& sym, int directions) {
  LevyLowerBoundReport report;
  report.sup_re_psi = -std::numeric_limits<double>::infinity();
  const auto dirs = unit_directions(sym.params().d, directions);
  for (double t : sym.breakpoints()) {
    for (const auto& w : dirs) {
      report.sup_re_psi = std::max(report.sup_re_psi, sym.eval(t, w).real());
    }
  }
  report.pass = report.sup_re_psi <= -sym.params().N0;
  return report;
}

}  // namespace paleyscope
