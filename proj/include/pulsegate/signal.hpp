#pragma once

// Uniform time grids and complex sampled waveforms.
//
// All times are in units of 1/Gamma. A ComplexSignal stores one value per
// grid node. Waveforms with step discontinuities (rectangular and rising
// exponential pulses, and everything derived from them) additionally record
// the left and right limits at the nodes where the step sits; the node value
// there is the mean of the two limits. Quadrature and the ODE integrators
// work interval by interval and use the one-sided limits, so a jump that
// falls on a node costs no accuracy.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pulsegate/error.hpp"

namespace pulsegate {

using complex = std::complex<double>;

class TimeGrid {
 public:
  /// Throws invalid_range unless t_end > t_start and n >= 2.
  TimeGrid(double t_start, double t_end, std::size_t n);

  /// Grid with an exact step: t_end = t_start + (n - 1) * dt.
  static TimeGrid with_step(double t_start, double dt, std::size_t n);

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  std::size_t size() const noexcept { return n_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t i) const noexcept { return t_start_ + static_cast<double>(i) * dt_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  TimeGrid(double t_start, double t_end, std::size_t n, double dt);

  double t_start_;
  double t_end_;
  std::size_t n_;
  double dt_;
};

TimeGrid make_grid(double t_start, double t_end, std::size_t n);

struct Jump {
  std::size_t index;
  complex left;
  complex right;
};

class ComplexSignal {
 public:
  /// All-zero signal.
  explicit ComplexSignal(TimeGrid grid);

  /// Throws invalid_range on length mismatch, non-finite values, or jumps
  /// that are out of range or not strictly ascending.
  ComplexSignal(TimeGrid grid, std::vector<complex> values, std::vector<Jump> jumps = {});

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const complex> values() const noexcept { return values_; }
  std::span<const Jump> jumps() const noexcept { return jumps_; }
  complex operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Limit approaching node i from earlier times.
  complex left_limit(std::size_t i) const noexcept;
  /// Limit approaching node i from later times.
  complex right_limit(std::size_t i) const noexcept;

  /// Largest |Im| over nodes and jump limits.
  double max_imag() const noexcept;

 private:
  const Jump* find_jump(std::size_t i) const noexcept;

  TimeGrid grid_;
  std::vector<complex> values_;
  std::vector<Jump> jumps_;
};

/// Union of the jump node indices of two signals, ascending.
std::vector<std::size_t> merged_jump_indices(const ComplexSignal& a, const ComplexSignal& b);

void require_same_grid(const ComplexSignal& a, const ComplexSignal& b);

/// Pointwise f(x), applied separately to each side of every jump.
template <class F>
ComplexSignal map(const ComplexSignal& x, F f) {
  std::vector<complex> out(x.size());
  const auto v = x.values();
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f(v[i]);
  std::vector<Jump> jumps;
  jumps.reserve(x.jumps().size());
  for (const Jump& j : x.jumps()) jumps.push_back({j.index, f(j.left), f(j.right)});
  return ComplexSignal(x.grid(), std::move(out), std::move(jumps));
}

/// Pointwise f(a, b) on a shared grid; jumps of either operand propagate.
template <class F>
ComplexSignal zip(const ComplexSignal& a, const ComplexSignal& b, F f) {
  require_same_grid(a, b);
  std::vector<complex> out(a.size());
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) out[i] = f(va[i], vb[i]);
  std::vector<Jump> jumps;
  for (std::size_t idx : merged_jump_indices(a, b)) {
    jumps.push_back({idx, f(a.left_limit(idx), b.left_limit(idx)),
                     f(a.right_limit(idx), b.right_limit(idx))});
  }
  return ComplexSignal(a.grid(), std::move(out), std::move(jumps));
}

ComplexSignal operator+(const ComplexSignal& a, const ComplexSignal& b);
ComplexSignal operator-(const ComplexSignal& a, const ComplexSignal& b);
ComplexSignal operator*(complex c, const ComplexSignal& x);

/// Composite trapezoid approximation of the integral of conj(f) * g.
/// Throws grid_mismatch if the grids differ.
complex inner_product(const ComplexSignal& f, const ComplexSignal& g);

/// Integral of |f|^2; equals Re inner_product(f, f).
double norm_sq(const ComplexSignal& f);

/// ||a - b|| / ||b|| in the quadrature norm (||a - b|| when b is zero).
double relative_l2_error(const ComplexSignal& a, const ComplexSignal& b);

}  // namespace pulsegate
