#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "paleyscope/spectral.hpp"
#include "paleyscope/symbols.hpp"

namespace paleyscope {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-1/2", "0.25" or "1e-3" exactly (decimal input is converted
/// digit by digit, not through a double).
Rational parse_rational(std::string_view text);
/// Nearest rational with denominator <= max_den; throws if it is further
/// than 1e-12 (relative) from v.
Rational rational_from_double(double v, std::int64_t max_den = 1000000);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

struct C3Delta0 {
  Rational c3;
  Rational delta0;
};

/// c3 = (2(d+1)(c2+1)+3) / (2(d+2)), delta0 = c2 - c3 + 1. Requires c2 > 1/2.
C3Delta0 derive_c3_delta0(const Rational& c2, int d);

/// Theta(th, vth) = th d - 2 vth.
Rational theta(const Rational& th, const Rational& vth, int d);
double theta(double th, double vth, int d);

/// Predicate on mu with both parity branches:
///   2 floor(mu/4) + 1 <= floor(d/2) + 2  if mu/2 - 2 floor(mu/4) in [0, 1),
///   2 floor(mu/4) + 2 <= floor(d/2) + 2  if mu/2 - 2 floor(mu/4) in [1, 2).
bool mu_admissible(const Rational& mu, int d);
bool mu_admissible(double mu, int d);

/// Open interval (lower, upper); upper unset means unbounded.
struct MuWindow {
  Rational lower;
  std::optional<Rational> upper;
};

struct KernelExponents {
  int d = 1;
  Rational c2, c3, delta0;
  std::array<Rational, 3> kappa{};
  std::array<Rational, 3> sigma{};
  std::array<MuWindow, 3> window{};

  // Filled by solve_mu.
  std::array<Rational, 3> rhs{};
  std::array<std::optional<Rational>, 3> mu{};
  std::array<bool, 3> free{};
  std::array<bool, 3> valid{};
  std::array<std::string, 3> diagnostic{};

  bool all_valid() const { return valid[0] && valid[1] && valid[2]; }
};

/// Exponents with c3, delta0 derived from c2 and default windows (d+2, inf).
KernelExponents make_exponents(const Rational& c2, int d, std::array<Rational, 3> kappa,
                               std::array<Rational, 3> sigma);

/// Right-hand side of row i of diag(delta0 - kappa_i) mu = b:
///   b1 = Theta(kappa1 + delta0, sigma1 - delta0) + 1,
///   b2 = Theta(kappa2 - delta0, sigma2 - c2),
///   b3 = Theta(kappa3 - delta0, sigma3 - c3).
Rational matrix_rhs(const KernelExponents& ke, int row);

/// Solves each row. Nondegenerate rows give mu = b / (delta0 - kappa) and are
/// valid iff mu > d+2. Degenerate rows need b = 0; mu is then free and set
/// to the midpoint of its window intersected with the admissible range
/// mu < 2 floor(d/2) + 4.
KernelExponents solve_mu(KernelExponents ke);

/// kappa_i = 1/gamma, sigma1 = (d+1)/gamma + 1/2, c2 = sigma2 = (d+2)/gamma + 1/2,
/// c3 = sigma3 = (d+1)/gamma + 3/2, windows (d+2, gamma+d+2), (d+2, gamma+d+4),
/// (d+2, 3 gamma+d+2), then solve_mu.
KernelExponents theorem_exponents(const Rational& gamma, int d);

struct ThetaIdentities {
  Rational row1;       // Theta(kappa1 + delta0, sigma1 - delta0) + 1
  Rational row2;       // Theta(kappa2 - delta0, sigma2 - c2)
  Rational row3;       // Theta(kappa3 - delta0, sigma3 - c3)
  Rational theta_c3;   // Theta(2 delta0, c3 - delta0), expected -3
  Rational theta_c2;   // Theta(2 delta0, c2 - delta0), expected -2 delta0 - 1
  Rational delta0;
  bool exact() const;  // all five equal their expected values
};

ThetaIdentities theta_identities(const KernelExponents& ke);

/// Grid-sampled envelopes for one (s, t) pair together with the rescaled
/// exponent M(t,s,xi) = int_s^t psi(r, xi (t-s)^{-1/gamma}) dr.
struct EnvelopeFamily {
  SpaceGrid grid;
  double s = 0.0;
  double t = 0.0;
  double gamma = 0.0;
  std::array<std::vector<double>, 3> F;
  std::vector<Complex> M;
};

/// F1 = sum_i |F^{-1}(xi^i |xi|^{gamma/2} e^M)|,
/// F2 = sum_{i,j} |F^{-1}(xi^i xi^j |xi|^{gamma/2} e^M)|,
/// F3 = sum_i |F^{-1}((t-s) psi(t, xi (t-s)^{-1/gamma}) xi^i |xi|^{gamma/2} e^M)|.
EnvelopeFamily synthesize_envelopes(const Symbol& sym, double gamma, const SpaceGrid& grid,
                                    double s, double t);

struct MomentReport {
  double mu = 0.0;
  // Integrals of |x|^mu F^2 over {cutoff < |x| < L/2}, one per inner cutoff.
  std::vector<double> inner_cutoffs;
  std::vector<double> tail_integrals;
  // Integrals over {cutoffs[0] < |x| < R} for R doubling up to L/2.
  std::vector<double> outer_radii;
  std::vector<double> partial_integrals;
  double value = 0.0;  // partial integral at R = L/2
  bool converged = false;
};

/// converged iff the last doubling of R (L/4 -> L/2) changes the value by less
/// than rel_tol relative (or both values vanish).
MomentReport moment_integral(const SpaceGrid& grid, std::span<const double> F, double mu,
                             const std::vector<double>& cutoffs, double rel_tol = 1e-6);

/// int_s^inf |xi|^{2 eta} exp(2 Re int_s^t psi(r, xi) dr) dt by geometric
/// Romberg blocks split at symbol breakpoints. Throws std::domain_error when
/// the integral diverges.
double assumption1_integral(const Symbol& sym, double eta, std::span<const double> xi,
                            double s = 0.0);

/// Sup of assumption1_integral over the samples.
double verify_assumption1(const Symbol& sym, double eta,
                          const std::vector<std::vector<double>>& xi_samples, double s = 0.0);

}  // namespace paleyscope
