#include "paleyscope/assumptions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paleyscope/quadrature.hpp"

namespace paleyscope {
namespace {

std::int64_t pow10(int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) v *= 10;
  return v;
}

std::int64_t floor_div(const Rational& r) {
  const std::int64_t q = r.numerator() / r.denominator();
  return (r.numerator() % r.denominator() != 0 && r.numerator() < 0) ? q - 1 : q;
}

Rational midpoint_window(const MuWindow& w, int d) {
  const Rational cap(2 * (d / 2) + 4);
  const Rational upper = w.upper ? std::min(*w.upper, cap) : cap;
  if (!(upper > w.lower)) throw std::domain_error("empty admissible mu window");
  return (w.lower + upper) / 2;
}

}  // namespace

// ---------------------------------------------------------------- rationals

Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("parse_rational: cannot parse '" + std::string(text) + "'"); };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == Rational(0)) fail();
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::int64_t mantissa = 0;
  int scale = 0;
  int digits = 0;
  bool dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (++digits > 17) fail();
      mantissa = mantissa * 10 + (c - '0');
      if (dot) ++scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (digits == 0) fail();
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    try {
      std::size_t used = 0;
      exponent = std::stoi(std::string(text.substr(i + 1)), &used);
      if (used != text.size() - i - 1) fail();
    } catch (const std::logic_error&) {
      fail();
    }
    i = text.size();
  }
  if (i != text.size()) fail();
  const int net = exponent - scale;
  if (std::abs(net) > 18) fail();
  Rational r = net >= 0 ? Rational(mantissa * pow10(net)) : Rational(mantissa, pow10(-net));
  return negative ? -r : r;
}

Rational rational_from_double(double v, std::int64_t max_den) {
  if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: non-finite value");
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = x - a;
    if (std::abs(static_cast<double>(p1) / q1 - v) <= 1e-15 * std::max(1.0, std::abs(v))) break;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  if (q1 == 0) throw std::invalid_argument("rational_from_double: no rational approximation");
  const Rational r(p1, q1);
  if (std::abs(to_double(r) - v) > 1e-12 * std::max(1.0, std::abs(v))) {
    throw std::invalid_argument("rational_from_double: value has no small-denominator form");
  }
  return r;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---------------------------------------------------------------- exponents

C3Delta0 derive_c3_delta0(const Rational& c2, int d) {
  if (!(c2 > Rational(1, 2))) throw std::invalid_argument("derive_c3_delta0: requires c2 > 1/2");
  if (d < 1) throw std::invalid_argument("derive_c3_delta0: d must be positive");
  const Rational c3 = (Rational(2 * (d + 1)) * (c2 + 1) + 3) / Rational(2 * (d + 2));
  return {c3, c2 - c3 + 1};
}

Rational theta(const Rational& th, const Rational& vth, int d) { return th * d - vth * 2; }
double theta(double th, double vth, int d) { return th * d - 2.0 * vth; }

bool mu_admissible(const Rational& mu, int d) {
  const std::int64_t q = floor_div(mu / 4);
  const Rational frac = mu / 2 - Rational(2 * q);
  const std::int64_t rhs = d / 2 + 2;
  return frac < Rational(1) ? 2 * q + 1 <= rhs : 2 * q + 2 <= rhs;
}

bool mu_admissible(double mu, int d) {
  const double q = std::floor(mu / 4.0);
  const double frac = mu / 2.0 - 2.0 * q;
  const double rhs = d / 2 + 2;
  return frac < 1.0 ? 2.0 * q + 1.0 <= rhs : 2.0 * q + 2.0 <= rhs;
}

KernelExponents make_exponents(const Rational& c2, int d, std::array<Rational, 3> kappa,
                               std::array<Rational, 3> sigma) {
  const auto [c3, delta0] = derive_c3_delta0(c2, d);
  KernelExponents ke;
  ke.d = d;
  ke.c2 = c2;
  ke.c3 = c3;
  ke.delta0 = delta0;
  ke.kappa = kappa;
  ke.sigma = sigma;
  for (auto& w : ke.window) w = MuWindow{Rational(d + 2), std::nullopt};
  return ke;
}

Rational matrix_rhs(const KernelExponents& ke, int row) {
  const int d = ke.d;
  switch (row) {
    case 0: return theta(ke.kappa[0] + ke.delta0, ke.sigma[0] - ke.delta0, d) + 1;
    case 1: return theta(ke.kappa[1] - ke.delta0, ke.sigma[1] - ke.c2, d);
    case 2: return theta(ke.kappa[2] - ke.delta0, ke.sigma[2] - ke.c3, d);
    default: throw std::out_of_range("matrix_rhs: row must be 0..2");
  }
}

KernelExponents solve_mu(KernelExponents ke) {
  const Rational floor_mu(ke.d + 2);
  for (int i = 0; i < 3; ++i) {
    ke.rhs[i] = matrix_rhs(ke, i);
    const Rational coef = ke.delta0 - ke.kappa[i];
    ke.mu[i].reset();
    ke.free[i] = false;
    ke.valid[i] = false;
    ke.diagnostic[i].clear();
    if (coef != Rational(0)) {
      const Rational mu = ke.rhs[i] / coef;
      ke.mu[i] = mu;
      ke.valid[i] = mu > floor_mu;
      if (!ke.valid[i]) ke.diagnostic[i] = "mu = " + to_string(mu) + " <= d+2";
      continue;
    }
    if (ke.rhs[i] != Rational(0)) {
      ke.diagnostic[i] = "degenerate row with nonzero right-hand side " + to_string(ke.rhs[i]);
      continue;
    }
    ke.free[i] = true;
    try {
      const Rational mu = midpoint_window(ke.window[i], ke.d);
      ke.mu[i] = mu;
      ke.valid[i] = mu > floor_mu && mu_admissible(mu, ke.d);
      if (!ke.valid[i]) ke.diagnostic[i] = "midpoint " + to_string(mu) + " not admissible";
    } catch (const std::domain_error&) {
      ke.diagnostic[i] = "no admissible mu in window";
    }
  }
  return ke;
}

KernelExponents theorem_exponents(const Rational& gamma, int d) {
  if (!(gamma > Rational(0))) throw std::invalid_argument("theorem_exponents: gamma must be positive");
  const Rational inv = 1 / gamma;
  const Rational half(1, 2);
  const Rational sigma1 = Rational(d + 1) * inv + half;
  const Rational c2 = Rational(d + 2) * inv + half;
  const Rational c3 = Rational(d + 1) * inv + Rational(3, 2);
  KernelExponents ke = make_exponents(c2, d, {inv, inv, inv}, {sigma1, c2, c3});
  if (ke.c3 != c3) throw std::logic_error("theorem_exponents: c3 mismatch with derived value");
  const Rational lo(d + 2);
  ke.window[0] = {lo, gamma + d + 2};
  ke.window[1] = {lo, gamma + d + 4};
  ke.window[2] = {lo, gamma * 3 + d + 2};
  return solve_mu(ke);
}

bool ThetaIdentities::exact() const {
  const Rational zero(0);
  return row1 == zero && row2 == zero && row3 == zero && theta_c3 == Rational(-3) &&
         theta_c2 == -delta0 * Rational(2) - Rational(1);
}

ThetaIdentities theta_identities(const KernelExponents& ke) {
  ThetaIdentities out;
  out.row1 = matrix_rhs(ke, 0);
  out.row2 = matrix_rhs(ke, 1);
  out.row3 = matrix_rhs(ke, 2);
  out.theta_c3 = theta(ke.delta0 * 2, ke.c3 - ke.delta0, ke.d);
  out.theta_c2 = theta(ke.delta0 * 2, ke.c2 - ke.delta0, ke.d);
  out.delta0 = ke.delta0;
  return out;
}

// ---------------------------------------------------------------- envelopes

EnvelopeFamily synthesize_envelopes(const Symbol& sym, double gamma, const SpaceGrid& grid,
                                    double s, double t) {
  if (!(s < t)) throw std::invalid_argument("synthesize_envelopes: requires s < t");
  if (!(gamma > 0.0)) throw std::invalid_argument("synthesize_envelopes: gamma must be > 0");
  const std::size_t N = grid.size();
  const int d = grid.d;
  const double span = t - s;
  const double rescale = std::pow(span, -1.0 / gamma);
  const auto amp = fractional_multiplier(grid, 0.5 * gamma);

  EnvelopeFamily env{grid, s, t, gamma, {}, std::vector<Complex>(N)};
  std::vector<Complex> base(N), drift(N);
  std::vector<double> xi(d), scaled(d);
  for (std::size_t idx = 0; idx < N; ++idx) {
    grid.wavevector(idx, xi);
    for (int a = 0; a < d; ++a) scaled[a] = xi[a] * rescale;
    env.M[idx] = symbol_time_integral(sym, s, t, scaled);
    base[idx] = amp[idx] * std::exp(env.M[idx]);
    drift[idx] = span * eval_symbol(sym, t, scaled);
  }

  for (auto& F : env.F) F.assign(N, 0.0);
  std::vector<Complex> buf(N);
  auto accumulate = [&](std::vector<double>& F) {
    inverse_transform(grid, buf);
    for (std::size_t idx = 0; idx < N; ++idx) F[idx] += std::abs(buf[idx]);
  };
  for (int i = 0; i < d; ++i) {
    for (std::size_t idx = 0; idx < N; ++idx) {
      grid.wavevector(idx, xi);
      buf[idx] = xi[i] * base[idx];
    }
    accumulate(env.F[0]);
    for (std::size_t idx = 0; idx < N; ++idx) {
      grid.wavevector(idx, xi);
      buf[idx] = drift[idx] * xi[i] * base[idx];
    }
    accumulate(env.F[2]);
    for (int j = 0; j < d; ++j) {
      for (std::size_t idx = 0; idx < N; ++idx) {
        grid.wavevector(idx, xi);
        buf[idx] = xi[i] * xi[j] * base[idx];
      }
      accumulate(env.F[1]);
    }
  }
  return env;
}

MomentReport moment_integral(const SpaceGrid& grid, std::span<const double> F, double mu,
                             const std::vector<double>& cutoffs, double rel_tol) {
  if (!(mu > 0.0)) throw std::invalid_argument("moment_integral: mu must be positive");
  if (F.size() != grid.size()) throw std::invalid_argument("moment_integral: size mismatch");
  if (cutoffs.empty()) throw std::invalid_argument("moment_integral: need at least one cutoff");
  const double half = 0.5 * grid.L;
  const double cell = grid.cell_volume();

  std::vector<double> radius(F.size()), weight(F.size());
  std::vector<double> x(grid.d);
  for (std::size_t idx = 0; idx < F.size(); ++idx) {
    grid.point(idx, x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    radius[idx] = std::sqrt(r2);
    weight[idx] = std::pow(radius[idx], mu) * F[idx] * F[idx] * cell;
  }
  auto shell = [&](double lo, double hi) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < F.size(); ++idx) {
      if (radius[idx] > lo && radius[idx] < hi) acc += weight[idx];
    }
    return acc;
  };

  MomentReport rep;
  rep.mu = mu;
  rep.inner_cutoffs = cutoffs;
  for (double c : cutoffs) rep.tail_integrals.push_back(shell(c, half));

  const double inner = cutoffs.front();
  const double floor_r = std::max(inner, 2.0 * grid.h());
  std::vector<double> radii;
  for (double R = half; R > floor_r && radii.size() < 64; R *= 0.5) radii.push_back(R);
  std::reverse(radii.begin(), radii.end());
  if (radii.empty()) radii.push_back(half);
  for (double R : radii) {
    rep.outer_radii.push_back(R);
    rep.partial_integrals.push_back(shell(inner, R));
  }
  rep.value = rep.partial_integrals.back();
  if (rep.partial_integrals.size() < 2) {
    rep.converged = false;
    return rep;
  }
  const double prev = rep.partial_integrals[rep.partial_integrals.size() - 2];
  rep.converged = (rep.value == 0.0 && prev == 0.0) ||
                  std::abs(rep.value - prev) < rel_tol * std::abs(rep.value);
  return rep;
}

// ------------------------------------------------------------- assumption 1

double assumption1_integral(const Symbol& sym, double eta, std::span<const double> xi,
                            double s) {
  if (eta < 0.0) throw std::invalid_argument("assumption1_integral: eta must be >= 0");
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  const double r = std::sqrt(r2);
  if (r == 0.0) {
    if (eta > 0.0) return 0.0;
    throw std::domain_error("assumption1_integral: diverges at xi = 0 with eta = 0");
  }
  const double weight = std::pow(r, 2.0 * eta);
  auto integrand = [&](double t) {
    return weight * std::exp(2.0 * symbol_time_integral(sym, s, t, xi).real());
  };

  const double rate = -eval_symbol(sym, s, xi).real();
  const double tau0 = rate > 0.0 ? 0.5 / rate : 1.0;
  std::vector<double> breaks;
  for (double b : symbol_breakpoints(sym)) {
    if (b > s) breaks.push_back(b);
  }
  const double last_break = breaks.empty() ? s : breaks.back();

  constexpr double kBlockTol = 1e-10;
  constexpr double kStopTol = 1e-10;
  double total = 0.0;
  double cur = s;
  double geo = s + tau0;
  double step = tau0;
  std::size_t next_break = 0;
  int quiet = 0;
  for (int block = 0; block < 4000; ++block) {
    double next = geo;
    if (next_break < breaks.size() && breaks[next_break] < next) next = breaks[next_break];
    const auto part = romberg(integrand, cur, next, kBlockTol);
    if (!std::isfinite(part.value) || !part.converged) break;
    total += part.value;
    if (next_break < breaks.size() && next == breaks[next_break]) ++next_break;
    if (next == geo) {
      step *= 2.0;
      geo += step;
    }
    cur = next;
    if (cur >= last_break) {
      quiet = part.value <= kStopTol * total ? quiet + 1 : 0;
      if (quiet == 2) return total;
    }
  }
  throw std::domain_error("assumption1_integral: integral diverges (symbol not elliptic?)");
}

double verify_assumption1(const Symbol& sym, double eta,
                          const std::vector<std::vector<double>>& xi_samples, double s) {
  if (xi_samples.empty()) throw std::invalid_argument("verify_assumption1: no samples");
  double sup = 0.0;
  for (const auto& xi : xi_samples) sup = std::max(sup, assumption1_integral(sym, eta, xi, s));
  return sup;
}

}  // namespace paleyscope
