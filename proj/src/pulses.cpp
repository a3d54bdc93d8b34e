#include "pulsegate/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pulsegate {

namespace {

// Pulse weight left outside the support window.
constexpr double kTailWeight = 1e-10;
// Relative pulse amplitude where a one-sided pulse is cut off.
constexpr double kLeadAmplitude = 1e-7;

void require_duration(double duration) {
  if (!std::isfinite(duration) || !(duration > 0.0)) {
    std::ostringstream msg;
    msg << "pulse duration must be positive (got " << duration << ")";
    throw Error(ErrorKind::invalid_range, msg.str());
  }
}

const CustomSamples& custom_table(const PulseSpec& spec) {
  if (!spec.custom) throw Error(ErrorKind::invalid_range, "custom pulse has no samples");
  return *spec.custom;
}

complex interpolate_custom(const CustomSamples& table, double x) {
  const auto& ts = table.t;
  if (x < ts.front() || x > ts.back()) return {0.0, 0.0};
  auto it = std::upper_bound(ts.begin(), ts.end(), x);
  if (it == ts.end()) return table.value.back();
  const std::size_t k = static_cast<std::size_t>(it - ts.begin());
  const double w = (x - ts[k - 1]) / (ts[k] - ts[k - 1]);
  return (1.0 - w) * table.value[k - 1] + w * table.value[k];
}

// Node index holding time t, if one lies within rounding distance.
std::optional<std::size_t> node_at(const TimeGrid& grid, double t) {
  const double pos = (t - grid.t_start()) / grid.dt();
  const double idx = std::round(pos);
  if (idx < 0.0 || idx > static_cast<double>(grid.size() - 1)) return std::nullopt;
  if (std::abs(pos - idx) > 1e-9) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

}  // namespace

std::string_view to_string(PulseShape shape) noexcept {
  switch (shape) {
    case PulseShape::rectangular: return "rect";
    case PulseShape::rising_exponential: return "rising-exp";
    case PulseShape::symmetric_exponential: return "sym-exp";
    case PulseShape::gaussian: return "gauss";
    case PulseShape::custom: return "custom";
  }
  return "unknown";
}

std::optional<PulseShape> parse_shape(std::string_view name) noexcept {
  for (PulseShape s : {PulseShape::rectangular, PulseShape::rising_exponential,
                       PulseShape::symmetric_exponential, PulseShape::gaussian, PulseShape::custom}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

CustomSamples read_custom_samples(std::istream& in) {
  CustomSamples out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::vector<double> cols;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        cols.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorKind::parse_error,
                    "custom pulse line " + std::to_string(line_no) + ": bad number '" + tok + "'");
      }
    }
    if (cols.size() != 2 && cols.size() != 3) {
      throw Error(ErrorKind::parse_error,
                  "custom pulse line " + std::to_string(line_no) + ": expected 2 or 3 columns");
    }
    if (!out.t.empty() && !(cols[0] > out.t.back())) {
      throw Error(ErrorKind::parse_error,
                  "custom pulse line " + std::to_string(line_no) + ": time must be strictly ascending");
    }
    for (double c : cols) {
      if (!std::isfinite(c)) {
        throw Error(ErrorKind::parse_error,
                    "custom pulse line " + std::to_string(line_no) + ": non-finite value");
      }
    }
    out.t.push_back(cols[0]);
    out.value.emplace_back(cols[1], cols.size() == 3 ? cols[2] : 0.0);
  }
  if (out.t.size() < 2) throw Error(ErrorKind::parse_error, "custom pulse needs at least two samples");
  return out;
}

CustomSamples load_custom_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open pulse file '" + path + "'");
  return read_custom_samples(in);
}

PulseSpec make_pulse(PulseShape shape, double duration) {
  if (shape == PulseShape::custom) {
    throw Error(ErrorKind::invalid_range, "custom pulses are built with make_custom_pulse");
  }
  require_duration(duration);
  return PulseSpec{shape, duration, nullptr};
}

PulseSpec make_custom_pulse(CustomSamples samples, double duration) {
  require_duration(duration);
  if (samples.t.size() < 2 || samples.t.size() != samples.value.size()) {
    throw Error(ErrorKind::invalid_range, "custom pulse needs matching t/value columns, >= 2 samples");
  }
  return PulseSpec{PulseShape::custom, duration,
                   std::make_shared<const CustomSamples>(std::move(samples))};
}

PulseSpec with_duration(PulseSpec spec, double duration) {
  require_duration(duration);
  spec.duration = duration;
  return spec;
}

double pulse_amplitude(const PulseSpec& spec, double t) {
  const double T = spec.duration;
  switch (spec.shape) {
    case PulseShape::rectangular: {
      const double h = 1.0 / std::sqrt(T);
      if (t > -T && t < 0.0) return h;
      if (t == -T || t == 0.0) return 0.5 * h;
      return 0.0;
    }
    case PulseShape::rising_exponential: {
      const double h = std::sqrt(2.0 / T);
      if (t < 0.0) return h * std::exp(t / T);
      if (t == 0.0) return 0.5 * h;
      return 0.0;
    }
    case PulseShape::symmetric_exponential:
      return std::sqrt(2.0 / T) * std::exp(-2.0 * std::abs(t) / T);
    case PulseShape::gaussian:
      return std::sqrt(2.0 / (std::sqrt(std::numbers::pi) * T)) * std::exp(-2.0 * t * t / (T * T));
    case PulseShape::custom:
      return interpolate_custom(custom_table(spec), t / T).real();
  }
  return 0.0;
}

Support pulse_support(const PulseSpec& spec) {
  const double T = spec.duration;
  switch (spec.shape) {
    case PulseShape::rectangular:
      return {-T, 0.0};
    case PulseShape::rising_exponential:
      // The dipole starts from rest at the grid start, so the cut is set by
      // amplitude rather than weight: b(lo) = 1e-7 b(0), leaving 1e-14 of
      // the norm outside.
      return {T * std::log(kLeadAmplitude), 0.0};
    case PulseShape::symmetric_exponential: {
      // Two-sided weight beyond a is exp(-4a/T); 6T leaves 4e-11.
      const double a = std::ceil(-0.25 * std::log(kTailWeight));
      return {-a * T, a * T};
    }
    case PulseShape::gaussian:
      return {-3.0 * T, 3.0 * T};
    case PulseShape::custom: {
      const auto& table = custom_table(spec);
      return {table.t.front() * T, table.t.back() * T};
    }
  }
  return {0.0, 0.0};
}

GridPolicy GridPolicy::refined(double factor) const {
  GridPolicy p = *this;
  p.points_per_duration *= factor;
  p.points_per_unit *= factor;
  return p;
}

TimeGrid default_grid_for(const PulseSpec& spec, const GridPolicy& policy) {
  require_duration(spec.duration);
  if (!(policy.points_per_duration > 0.0) || !(policy.points_per_unit > 0.0) || !(policy.lead >= 0.0) ||
      !(policy.tail >= 0.0)) {
    throw Error(ErrorKind::invalid_range, "grid policy needs positive densities and nonnegative padding");
  }
  const double T = spec.duration;
  double dt = std::min(T / policy.points_per_duration, 1.0 / policy.points_per_unit);
  if (spec.shape == PulseShape::rectangular) {
    dt = T / std::ceil(T / dt - 1e-9);
  }
  const Support s = pulse_support(spec);
  const double lo = s.lo - policy.lead;
  const double hi = s.hi + policy.tail;

  double k = std::ceil(-lo / dt);
  if (-k * dt > lo) ++k;
  const double t_start = -k * dt;
  double steps = std::ceil((hi - t_start) / dt);
  if (t_start + steps * dt < hi) ++steps;
  return TimeGrid::with_step(t_start, dt, static_cast<std::size_t>(steps) + 1);
}

ComplexSignal sample_pulse(const PulseSpec& spec, const TimeGrid& grid) {
  const Support s = pulse_support(spec);
  const double slack = 1e-9 * grid.dt();
  if (grid.t_start() > s.lo + slack || grid.t_end() < s.hi - slack) {
    std::ostringstream msg;
    msg << "grid [" << grid.t_start() << ", " << grid.t_end() << "] does not cover the "
        << to_string(spec.shape) << " support [" << s.lo << ", " << s.hi << "]";
    throw Error(ErrorKind::unsupported_span, msg.str());
  }

  const std::size_t n = grid.size();
  std::vector<complex> values(n);
  const double T = spec.duration;

  if (spec.shape == PulseShape::custom) {
    const auto& table = custom_table(spec);
    for (std::size_t i = 0; i < n; ++i) values[i] = interpolate_custom(table, grid.time(i) / T);
    ComplexSignal raw(grid, std::move(values));
    const double norm = norm_sq(raw);
    if (!(norm > 0.0)) throw Error(ErrorKind::invalid_range, "custom pulse is zero on the grid");
    return complex(1.0 / std::sqrt(norm), 0.0) * raw;
  }

  for (std::size_t i = 0; i < n; ++i) values[i] = pulse_amplitude(spec, grid.time(i));

  std::vector<Jump> jumps;
  auto add_step = [&](double t_step, double left, double right) {
    if (auto idx = node_at(grid, t_step)) jumps.push_back({*idx, left, right});
  };
  if (spec.shape == PulseShape::rectangular) {
    const double h = 1.0 / std::sqrt(T);
    add_step(-T, 0.0, h);
    add_step(0.0, h, 0.0);
  } else if (spec.shape == PulseShape::rising_exponential) {
    add_step(0.0, std::sqrt(2.0 / T), 0.0);
  }
  return ComplexSignal(grid, std::move(values), std::move(jumps));
}

}  // namespace pulsegate
