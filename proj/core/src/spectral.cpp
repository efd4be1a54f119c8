#include "paleyscope/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace paleyscope {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays (fftw_execute_dft) is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int d, int n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(d, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    int dims[3] = {n, n, n};
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(d, dims, scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const SpaceGrid& grid, std::span<Complex> data, int sign) {
  if (data.size() != grid.size()) throw std::invalid_argument("fft: size mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_cache().get(grid.d, grid.n, sign), ptr, ptr);
}

// (-1)^{k_0 + ... + k_{d-1}} for the flat index.
double checkerboard(const SpaceGrid& grid, std::size_t idx) {
  const auto k = grid.unravel(idx);
  int parity = 0;
  for (int a = 0; a < grid.d; ++a) parity += k[a];
  return (parity & 1) ? -1.0 : 1.0;
}

void require_same_grid(const SpaceGrid& a, const SpaceGrid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace

// --------------------------------------------------------------------- grid

SpaceGrid::SpaceGrid(int d_, int n_, double L_) : d(d_), n(n_), L(L_) { validate(); }

void SpaceGrid::validate() const {
  if (d < 1 || d > 3) throw std::invalid_argument("SpaceGrid: d must be 1, 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("SpaceGrid: n must be a power of two >= 8");
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("SpaceGrid: L must be positive");
}

double SpaceGrid::cell_volume() const { return std::pow(h(), d); }

std::size_t SpaceGrid::size() const {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  return total;
}

double SpaceGrid::frequency(int j) const {
  return 2.0 * std::numbers::pi * signed_index(j) / L;
}

std::array<int, 3> SpaceGrid::unravel(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int a = d - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % n);
    idx /= n;
  }
  return out;
}

std::size_t SpaceGrid::ravel(std::span<const int> index) const {
  std::size_t idx = 0;
  for (int a = 0; a < d; ++a) {
    const int j = ((index[a] % n) + n) % n;
    idx = idx * n + static_cast<std::size_t>(j);
  }
  return idx;
}

void SpaceGrid::point(std::size_t idx, std::span<double> x) const {
  const auto k = unravel(idx);
  for (int a = 0; a < d; ++a) x[a] = node(k[a]);
}

void SpaceGrid::wavevector(std::size_t idx, std::span<double> xi) const {
  const auto k = unravel(idx);
  for (int a = 0; a < d; ++a) xi[a] = frequency(k[a]);
}

double SpaceGrid::wavenumber(std::size_t idx) const {
  double xi[3];
  wavevector(idx, std::span<double>(xi, d));
  double acc = 0.0;
  for (int a = 0; a < d; ++a) acc += xi[a] * xi[a];
  return std::sqrt(acc);
}

// ------------------------------------------------------------------- fields

Field Field::zeros(const SpaceGrid& grid, int channels, Domain domain) {
  if (channels < 1) throw std::invalid_argument("Field: need at least one channel");
  grid.validate();
  Field f;
  f.grid = grid;
  f.channels = channels;
  f.domain = domain;
  f.values.assign(grid.size() * channels, Complex{});
  return f;
}

std::span<Complex> Field::channel(int k) {
  return std::span<Complex>(values).subspan(k * grid.size(), grid.size());
}

std::span<const Complex> Field::channel(int k) const {
  return std::span<const Complex>(values).subspan(k * grid.size(), grid.size());
}

SpaceTimeField SpaceTimeField::zeros(const SpaceGrid& grid, int channels, double t0,
                                     double dt, int nt) {
  if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: dt must be positive");
  if (nt < 1) throw std::invalid_argument("SpaceTimeField: nt must be positive");
  SpaceTimeField f;
  f.t0 = t0;
  f.dt = dt;
  f.slices.assign(nt, Field::zeros(grid, channels));
  return f;
}

void SpaceTimeField::validate() const {
  if (slices.empty()) throw std::invalid_argument("SpaceTimeField: no slices");
  if (!(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: dt must be positive");
  for (const auto& s : slices) {
    if (!(s.grid == grid()) || s.channels != channels() || s.domain != Domain::space ||
        s.values.size() != s.grid.size() * s.channels) {
      throw std::invalid_argument("SpaceTimeField: slices must share grid and channels");
    }
  }
}

ScalarSpaceTime ScalarSpaceTime::zeros(const SpaceGrid& grid, double t0, double dt, int nt) {
  ScalarSpaceTime g;
  g.grid = grid;
  g.t0 = t0;
  g.dt = dt;
  g.nt = nt;
  g.values.assign(grid.size() * nt, 0.0);
  return g;
}

std::span<double> ScalarSpaceTime::slice(int i) {
  return std::span<double>(values).subspan(i * grid.size(), grid.size());
}

std::span<const double> ScalarSpaceTime::slice(int i) const {
  return std::span<const double>(values).subspan(i * grid.size(), grid.size());
}

ScalarSpaceTime channel_energy(const SpaceTimeField& f) {
  f.validate();
  auto out = ScalarSpaceTime::zeros(f.grid(), f.t0, f.dt, f.nt());
  const std::size_t N = f.grid().size();
  for (int i = 0; i < f.nt(); ++i) {
    auto dst = out.slice(i);
    for (int k = 0; k < f.channels(); ++k) {
      const auto src = f.slices[i].channel(k);
      for (std::size_t x = 0; x < N; ++x) dst[x] += std::norm(src[x]);
    }
  }
  return out;
}

// --------------------------------------------------------------- transforms

void forward_transform(const SpaceGrid& grid, std::span<Complex> data) {
  execute(grid, data, FFTW_FORWARD);
  const double scale = grid.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * checkerboard(grid, i);
}

void inverse_transform(const SpaceGrid& grid, std::span<Complex> data) {
  const double scale = std::pow(grid.L, -grid.d);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * checkerboard(grid, i);
  execute(grid, data, FFTW_BACKWARD);
}

Field to_frequency(const Field& f) {
  if (f.domain != Domain::space) throw std::invalid_argument("to_frequency: field is not in space");
  Field out = f;
  for (int k = 0; k < f.channels; ++k) forward_transform(out.grid, out.channel(k));
  out.domain = Domain::frequency;
  return out;
}

Field to_space(const Field& f) {
  if (f.domain != Domain::frequency) {
    throw std::invalid_argument("to_space: field is not in frequency");
  }
  Field out = f;
  for (int k = 0; k < f.channels; ++k) inverse_transform(out.grid, out.channel(k));
  out.domain = Domain::space;
  return out;
}

Field apply_multiplier(const Field& f, const FrequencyFunction& m) {
  Field hat = to_frequency(f);
  const SpaceGrid& grid = f.grid;
  std::vector<double> xi(grid.d);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    grid.wavevector(idx, xi);
    const Complex factor = m(xi);
    for (int k = 0; k < f.channels; ++k) hat.channel(k)[idx] *= factor;
  }
  return to_space(hat);
}

std::vector<double> fractional_multiplier(const SpaceGrid& grid, double eta) {
  if (eta < 0.0) throw std::invalid_argument("fractional_multiplier: eta must be >= 0");
  std::vector<double> out(grid.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const double r = grid.wavenumber(idx);
    out[idx] = eta == 0.0 ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, eta));
  }
  return out;
}

// ------------------------------------------------------------------ kernels

KernelMultiplier kernel_hat(const Symbol& sym, double s, double t, double eta,
                            const SpaceGrid& grid) {
  if (s > t) throw std::invalid_argument("kernel_hat: requires s <= t");
  if (eta < 0.0) throw std::invalid_argument("kernel_hat: eta must be >= 0");
  const int sd = symbol_dimension(sym);
  if (sd != 0 && sd != grid.d) throw std::invalid_argument("kernel_hat: symbol dimension mismatch");

  KernelMultiplier km{grid, s, t, eta, std::vector<Complex>(grid.size())};
  const auto weight = fractional_multiplier(grid, eta);
  std::vector<double> xi(grid.d);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (weight[idx] == 0.0) continue;
    grid.wavevector(idx, xi);
    km.values[idx] = weight[idx] * std::exp(symbol_time_integral(sym, s, t, xi));
  }
  return km;
}

Field synthesize_kernel(const KernelMultiplier& kmult) {
  Field out = Field::zeros(kmult.grid, 1, Domain::frequency);
  std::copy(kmult.values.begin(), kmult.values.end(), out.values.begin());
  return to_space(out);
}

Field convolve_slice(const KernelMultiplier& kmult, const Field& f) {
  require_same_grid(kmult.grid, f.grid);
  Field hat = f.domain == Domain::space ? to_frequency(f) : f;
  for (int k = 0; k < f.channels; ++k) {
    auto ch = hat.channel(k);
    for (std::size_t idx = 0; idx < ch.size(); ++idx) ch[idx] *= kmult.values[idx];
  }
  return f.domain == Domain::space ? to_space(hat) : hat;
}

Field discrete_delta(const SpaceGrid& grid, int channels) {
  Field out = Field::zeros(grid, channels);
  const std::array<int, 3> centre{grid.n / 2, grid.n / 2, grid.n / 2};
  const std::size_t idx = grid.ravel(std::span<const int>(centre.data(), grid.d));
  for (int k = 0; k < channels; ++k) out.channel(k)[idx] = 1.0 / grid.cell_volume();
  return out;
}

// -------------------------------------------------------------- phase table

PhaseTable::PhaseTable(const Symbol& sym, const SpaceGrid& grid, double t0, double dt, int nt)
    : grid_(grid), t0_(t0), dt_(dt), nt_(nt), stationary_(is_time_independent(sym)) {
  const int sd = symbol_dimension(sym);
  if (sd != 0 && sd != grid.d) throw std::invalid_argument("PhaseTable: symbol dimension mismatch");
  const std::size_t N = grid.size();
  std::vector<double> xi(grid.d);
  if (stationary_) {
    psi_.resize(N);
    for (std::size_t idx = 0; idx < N; ++idx) {
      grid.wavevector(idx, xi);
      psi_[idx] = eval_symbol(sym, t0, xi);
    }
    return;
  }
  phi_.assign(N * nt, Complex{});
  for (int i = 1; i < nt; ++i) {
    const double a = t0 + (i - 1) * dt;
    const double b = t0 + i * dt;
    for (std::size_t idx = 0; idx < N; ++idx) {
      grid.wavevector(idx, xi);
      phi_[i * N + idx] = phi_[(i - 1) * N + idx] + symbol_time_integral(sym, a, b, xi);
    }
  }
}

Complex PhaseTable::exponent(int i, int j, std::size_t idx) const {
  if (stationary_) return psi_[idx] * ((i - j) * dt_);
  const std::size_t N = grid_.size();
  return phi_[i * N + idx] - phi_[j * N + idx];
}

void PhaseTable::propagator(int i, int j, std::span<Complex> out) const {
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = std::exp(exponent(i, j, idx));
}

double aliasing_budget(const Symbol& sym, const SpaceGrid& grid, double t_min) {
  if (!(t_min > 0.0)) throw std::invalid_argument("aliasing_budget: t_min must be positive");
  const auto bps = symbol_breakpoints(sym);
  std::vector<double> xi(grid.d);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.unravel(idx);
    bool boundary = false;
    for (int a = 0; a < grid.d; ++a) boundary = boundary || k[a] == grid.n / 2;
    if (!boundary) continue;
    grid.wavevector(idx, xi);
    for (double s : bps) {
      worst = std::max(worst, std::abs(std::exp(symbol_time_integral(sym, s, s + t_min, xi))));
    }
  }
  return worst;
}

}  // namespace paleyscope
