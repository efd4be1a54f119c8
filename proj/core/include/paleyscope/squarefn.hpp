#pragma once

#include <vector>

#include "paleyscope/spectral.hpp"
#include "paleyscope/symbols.hpp"

namespace paleyscope {

/// G f(t_i, x) on the input grid, nonnegative.
using SquareField = ScalarSpaceTime;

/// G f(t_i, x)^2 = sum over channels of the trapezoid rule on s_j <= t_i of
/// |K(t_i, s_j) * f(s_j)|^2 with K^ = |xi|^eta exp(int_s^t psi). The s = t
/// endpoint is included with weight dt/2; the first slice stands in for
/// s = -infinity, so f should vanish there.
SquareField square_function(const Symbol& sym, double eta, const SpaceTimeField& f);

/// (sum h^d dt |g|^p)^{1/p}.
double lp_space_time_norm(const SquareField& g, double p);
/// Same with |f|_H = l2 norm over channels.
double lp_space_time_norm(const SpaceTimeField& f, double p);

struct LpReport {
  double p = 2.0;
  double norm_G = 0.0;
  double norm_f = 0.0;
  double ratio = 0.0;  // NaN when degenerate
  bool degenerate = false;
  int d = 0;
  int n = 0;
  int nt = 0;
};

LpReport lp_ratio(const Symbol& sym, double eta, const SpaceTimeField& f, double p);

/// One square function, several exponents.
std::vector<LpReport> lp_ratios(const Symbol& sym, double eta, const SpaceTimeField& f,
                                const std::vector<double>& ps);

/// ||G f||_2^2 evaluated on the frequency side without inverse transforms:
/// sum_i dt sum_{j<=i} w_ij L^{-d} sum_xi |K^(t_i,s_j,xi) f^(s_j,xi)|^2.
double frequency_side_energy(const Symbol& sym, double eta, const SpaceTimeField& f);

/// (int_0^inf |(-Delta)^{gamma/2} e^{-t(-Delta)^gamma} f|^2 dt)^{1/2} in L_p
/// over space, against ||f||_p. The time integral uses t = e^u on a uniform
/// u grid of spacing du.
LpReport elliptic_square_function(const Field& f, double gamma, double p, double du = 0.1);

/// Relative sup discrepancy between G(f_c)(t, x) and G f(c^gamma t, c x)
/// for f_c(t, x) = f(c^gamma t, c x), with eta = gamma/2. Both sides are
/// taken on the input grid, so c must be a positive integer with c^gamma
/// integral and f must start at t0 = 0; otherwise throws "incompatible c".
double scaling_check(const FractionalSymbol& sym, const SpaceTimeField& f, int c);

}  // namespace paleyscope
