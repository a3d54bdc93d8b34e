#include "pulsegate/signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsegate {

namespace {

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// conj(a) * b without the NaN/Inf recovery path of the library operator.
inline complex conj_mul(complex a, complex b) {
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

}  // namespace

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n)
    : TimeGrid(t_start, t_end, n, n >= 2 ? (t_end - t_start) / static_cast<double>(n - 1) : 0.0) {}

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n, double dt)
    : t_start_(t_start), t_end_(t_end), n_(n), dt_(dt) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start) || n < 2 || !(dt > 0.0)) {
    std::ostringstream msg;
    msg << "time grid needs t_end > t_start and n >= 2 (got [" << t_start << ", " << t_end
        << "], n=" << n << ")";
    throw Error(ErrorKind::invalid_range, msg.str());
  }
}

TimeGrid TimeGrid::with_step(double t_start, double dt, std::size_t n) {
  if (!(dt > 0.0) || n < 2) {
    throw Error(ErrorKind::invalid_range, "time grid needs dt > 0 and n >= 2");
  }
  return TimeGrid(t_start, t_start + static_cast<double>(n - 1) * dt, n, dt);
}

TimeGrid make_grid(double t_start, double t_end, std::size_t n) { return TimeGrid(t_start, t_end, n); }

ComplexSignal::ComplexSignal(TimeGrid grid) : grid_(grid), values_(grid.size()) {}

ComplexSignal::ComplexSignal(TimeGrid grid, std::vector<complex> values, std::vector<Jump> jumps)
    : grid_(grid), values_(std::move(values)), jumps_(std::move(jumps)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::invalid_range, "signal length does not match its grid");
  }
  for (const complex& v : values_) {
    if (!finite(v)) throw Error(ErrorKind::invalid_range, "signal contains a non-finite value");
  }
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const Jump& j = jumps_[k];
    if (j.index >= values_.size() || (k > 0 && jumps_[k - 1].index >= j.index)) {
      throw Error(ErrorKind::invalid_range, "jump nodes must be in range and strictly ascending");
    }
    if (!finite(j.left) || !finite(j.right)) {
      throw Error(ErrorKind::invalid_range, "jump limits must be finite");
    }
    values_[j.index] = 0.5 * (j.left + j.right);
  }
}

const Jump* ComplexSignal::find_jump(std::size_t i) const noexcept {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), i,
                             [](const Jump& j, std::size_t idx) { return j.index < idx; });
  return (it != jumps_.end() && it->index == i) ? &*it : nullptr;
}

complex ComplexSignal::left_limit(std::size_t i) const noexcept {
  if (jumps_.empty()) return values_[i];
  const Jump* j = find_jump(i);
  return j ? j->left : values_[i];
}

complex ComplexSignal::right_limit(std::size_t i) const noexcept {
  if (jumps_.empty()) return values_[i];
  const Jump* j = find_jump(i);
  return j ? j->right : values_[i];
}

double ComplexSignal::max_imag() const noexcept {
  double m = 0.0;
  for (const complex& v : values_) m = std::max(m, std::abs(v.imag()));
  for (const Jump& j : jumps_) m = std::max({m, std::abs(j.left.imag()), std::abs(j.right.imag())});
  return m;
}

std::vector<std::size_t> merged_jump_indices(const ComplexSignal& a, const ComplexSignal& b) {
  std::vector<std::size_t> out;
  out.reserve(a.jumps().size() + b.jumps().size());
  for (const Jump& j : a.jumps()) out.push_back(j.index);
  for (const Jump& j : b.jumps()) out.push_back(j.index);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_same_grid(const ComplexSignal& a, const ComplexSignal& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorKind::grid_mismatch, "signals are sampled on different grids");
  }
}

ComplexSignal operator+(const ComplexSignal& a, const ComplexSignal& b) {
  return zip(a, b, [](complex x, complex y) { return x + y; });
}

ComplexSignal operator-(const ComplexSignal& a, const ComplexSignal& b) {
  return zip(a, b, [](complex x, complex y) { return x - y; });
}

ComplexSignal operator*(complex c, const ComplexSignal& x) {
  return map(x, [c](complex v) { return c * v; });
}

complex inner_product(const ComplexSignal& f, const ComplexSignal& g) {
  require_same_grid(f, g);
  const auto fv = f.values();
  const auto gv = g.values();
  const std::size_t n = fv.size();
  const double dt = f.grid().dt();

  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    re += fv[i].real() * gv[i].real() + fv[i].imag() * gv[i].imag();
    im += fv[i].real() * gv[i].imag() - fv[i].imag() * gv[i].real();
  }
  complex sum = complex(re, im) + 0.5 * (conj_mul(fv[0], gv[0]) + conj_mul(fv[n - 1], gv[n - 1]));

  // At a jump node the plain rule weights the product of the means; the
  // piecewise rule wants half of each one-sided product instead.
  for (std::size_t idx : merged_jump_indices(f, g)) {
    const double w = (idx == 0 || idx + 1 == n) ? 0.5 : 1.0;
    sum -= w * conj_mul(fv[idx], gv[idx]);
    if (idx > 0) sum += 0.5 * conj_mul(f.left_limit(idx), g.left_limit(idx));
    if (idx + 1 < n) sum += 0.5 * conj_mul(f.right_limit(idx), g.right_limit(idx));
  }
  return dt * sum;
}

double norm_sq(const ComplexSignal& f) { return inner_product(f, f).real(); }

double relative_l2_error(const ComplexSignal& a, const ComplexSignal& b) {
  const double diff = std::sqrt(std::max(0.0, norm_sq(a - b)));
  const double ref = std::sqrt(std::max(0.0, norm_sq(b)));
  return ref > 0.0 ? diff / ref : diff;
}

}  // namespace pulsegate
