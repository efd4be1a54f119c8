#pragma once

#include <span>
#include <vector>

#include "paleyscope/spectral.hpp"
#include "paleyscope/symbols.hpp"

namespace paleyscope {

/// Radii in cell units: a ball of index radius m holds the cells with
/// |offset| < m + 1/2, so m = 0 is the single cell. Dyadic uses
/// m in {0, 1, 2, 4, ..., max_m}; full uses every m.
enum class RadiusLadder { dyadic, full };

std::vector<int> radius_ladder(int max_m, RadiusLadder ladder);

/// Centered Hardy-Littlewood maximal function of one real slice: sup over the
/// ladder (m <= n/2 - 1, periodic wrap) of ball averages.
std::vector<double> maximal_space(const SpaceGrid& grid, std::span<const double> f,
                                  RadiusLadder ladder = RadiusLadder::dyadic);
ScalarSpaceTime maximal_space(const ScalarSpaceTime& g,
                              RadiusLadder ladder = RadiusLadder::dyadic);

/// Same along time at each fixed x: intervals [i-m, i+m] with the data
/// extended by zero outside the window and the full length 2m+1 in the
/// denominator, m <= nt - 1.
ScalarSpaceTime maximal_time(const ScalarSpaceTime& g,
                             RadiusLadder ladder = RadiusLadder::dyadic);

struct SharpOptions {
  // Every grid point as a cylinder centre instead of a half-extent lattice.
  // Exact sup over the centred family; O(cylinder volume) per point.
  bool full_centers = false;
};

/// Sup over cylinders Q containing (t, x) of |Q|^{-1} int_Q |g - g_Q|.
/// Rungs R = dt 2^k: time half-width 2^k - 1 slices (clipped to the window),
/// space ball {|y - x| < R^delta0} with periodic wrap, the whole torus once
/// R^delta0 >= L/2.
ScalarSpaceTime sharp_function(const ScalarSpaceTime& g, double delta0,
                               const SharpOptions& options = {});

/// sup over grid points of (G f)^sharp / sqrt(M_t M_x |f|_H^2), with 0/0 = 0.
double verify_sharp_bound(const Symbol& sym, double eta, const SpaceTimeField& f,
                          double delta0, const SharpOptions& options = {});

struct FeffermanSteinResult {
  double ratio = 0.0;  // ||h - mean||_p / ||h^sharp||_p, NaN if degenerate
  bool degenerate = false;
};

FeffermanSteinResult fefferman_stein_check(const ScalarSpaceTime& h, double p, double delta0,
                                           const SharpOptions& options = {});

}  // namespace paleyscope
