#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "paleyscope/symbols.hpp"

namespace paleyscope {

/// Uniform periodic grid on [-L/2, L/2)^d with n points per axis.
/// Flat indices are row-major with axis 0 slowest.
struct SpaceGrid {
  int d = 1;
  int n = 128;
  double L = 24.0;

  SpaceGrid() = default;
  SpaceGrid(int d, int n, double L);

  double h() const { return L / n; }
  double cell_volume() const;
  std::size_t size() const;

  double node(int j) const { return -0.5 * L + j * h(); }
  int signed_index(int j) const { return j < n / 2 ? j : j - n; }
  /// Angular frequency of FFT-ordered index j along one axis.
  double frequency(int j) const;

  std::array<int, 3> unravel(std::size_t idx) const;
  std::size_t ravel(std::span<const int> index) const;
  void point(std::size_t idx, std::span<double> x) const;
  void wavevector(std::size_t idx, std::span<double> xi) const;
  double wavenumber(std::size_t idx) const;  // |xi|

  /// Throws unless d in 1..3, n >= 8 is a power of two and L > 0.
  void validate() const;

  friend bool operator==(const SpaceGrid&, const SpaceGrid&) = default;
};

enum class Domain { space, frequency };

/// K_H complex channels on one grid, channel-major.
struct Field {
  SpaceGrid grid;
  int channels = 1;
  Domain domain = Domain::space;
  std::vector<Complex> values;

  static Field zeros(const SpaceGrid& grid, int channels, Domain domain = Domain::space);

  std::span<Complex> channel(int k);
  std::span<const Complex> channel(int k) const;
};

/// Time-indexed slices t_i = t0 + i dt sharing grid and channel count.
struct SpaceTimeField {
  double t0 = 0.0;
  double dt = 0.01;
  std::vector<Field> slices;

  static SpaceTimeField zeros(const SpaceGrid& grid, int channels, double t0, double dt,
                              int nt);

  int nt() const { return static_cast<int>(slices.size()); }
  double time(int i) const { return t0 + i * dt; }
  const SpaceGrid& grid() const { return slices.front().grid; }
  int channels() const { return slices.front().channels; }

  void validate() const;
};

/// Real scalar space-time array, slice-major.
struct ScalarSpaceTime {
  SpaceGrid grid;
  double t0 = 0.0;
  double dt = 0.01;
  int nt = 0;
  std::vector<double> values;

  static ScalarSpaceTime zeros(const SpaceGrid& grid, double t0, double dt, int nt);

  std::span<double> slice(int i);
  std::span<const double> slice(int i) const;
  double& at(int i, std::size_t idx) { return values[i * grid.size() + idx]; }
  double at(int i, std::size_t idx) const { return values[i * grid.size() + idx]; }
};

/// |f|_H^2 at every space-time point.
ScalarSpaceTime channel_energy(const SpaceTimeField& f);

// Transforms. Forward: h^d sum_x e^{-i x.xi} f(x); inverse: L^{-d} sum_xi e^{i x.xi}.
Field to_frequency(const Field& f);
Field to_space(const Field& f);

/// In-place transforms of one channel laid out on `grid`.
void forward_transform(const SpaceGrid& grid, std::span<Complex> data);
void inverse_transform(const SpaceGrid& grid, std::span<Complex> data);

using FrequencyFunction = std::function<Complex(std::span<const double> xi)>;

/// Multiplies every channel of a space-domain field by m(xi).
Field apply_multiplier(const Field& f, const FrequencyFunction& m);

/// |xi|^eta on the frequency nodes with the zero mode set to 0 when eta > 0.
std::vector<double> fractional_multiplier(const SpaceGrid& grid, double eta);

struct KernelMultiplier {
  SpaceGrid grid;
  double s = 0.0;
  double t = 0.0;
  double eta = 0.0;
  std::vector<Complex> values;
};

/// |xi|^eta exp(int_s^t psi(r, xi) dr) on every frequency node.
KernelMultiplier kernel_hat(const Symbol& sym, double s, double t, double eta,
                            const SpaceGrid& grid);

Field synthesize_kernel(const KernelMultiplier& kmult);

/// Frequency-side product per channel. A space-domain input yields a
/// space-domain result and likewise for frequency.
Field convolve_slice(const KernelMultiplier& kmult, const Field& f);

/// Grid delta: value h^{-d} at x = 0.
Field discrete_delta(const SpaceGrid& grid, int channels = 1);

/// Cumulative exponents Phi_i(xi) = int_{t0}^{t_i} psi(r, xi) dr on the
/// frequency nodes, so that the kernel exponent between slices j <= i is
/// Phi_i - Phi_j. Time-independent symbols use (t_i - t_j) psi(xi) directly.
class PhaseTable {
 public:
  PhaseTable(const Symbol& sym, const SpaceGrid& grid, double t0, double dt, int nt);

  Complex exponent(int i, int j, std::size_t idx) const;
  /// exp(Phi_i - Phi_j) for every node.
  void propagator(int i, int j, std::span<Complex> out) const;

  const SpaceGrid& grid() const { return grid_; }
  int nt() const { return nt_; }

 private:
  SpaceGrid grid_;
  double t0_;
  double dt_;
  int nt_;
  bool stationary_;
  std::vector<Complex> psi_;  // stationary symbol values
  std::vector<Complex> phi_;  // nt x size cumulative exponents
};

/// Largest |exp(int_{t}^{t+t_min} psi)| over frequency nodes on the
/// boundary of the grid's frequency box. Values above ~1e-12 mean the
/// shortest kernel is not resolved by the grid.
double aliasing_budget(const Symbol& sym, const SpaceGrid& grid, double t_min);

}  // namespace paleyscope
