#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulsegate/signal.hpp"

namespace pulsegate {

enum class PulseShape {
  rectangular,           // 1/sqrt(T) on (-T, 0)
  rising_exponential,    // sqrt(2/T) exp(t/T) for t < 0
  symmetric_exponential, // sqrt(2/T) exp(-2|t|/T)
  gaussian,              // sqrt(2/(sqrt(pi) T)) exp(-2 t^2/T^2)
  custom,                // user samples, renormalised
};

/// CLI names: rect, rising-exp, sym-exp, gauss, custom.
std::string_view to_string(PulseShape shape) noexcept;
std::optional<PulseShape> parse_shape(std::string_view name) noexcept;

/// Custom pulse table. The time column is in units of the pulse duration T,
/// so a custom shape rescales with T exactly like the built-in ones.
struct CustomSamples {
  std::vector<double> t;
  std::vector<complex> value;
};

/// Reads whitespace- or comma-separated (t, value) or (t, re, im) lines with
/// strictly ascending t. Blank lines and lines starting with '#' are skipped.
CustomSamples read_custom_samples(std::istream& in);
CustomSamples load_custom_samples(const std::string& path);

struct PulseSpec {
  PulseShape shape = PulseShape::gaussian;
  double duration = 1.0;  // T in units of 1/Gamma
  std::shared_ptr<const CustomSamples> custom;
};

PulseSpec make_pulse(PulseShape shape, double duration);
PulseSpec make_custom_pulse(CustomSamples samples, double duration = 1.0);
PulseSpec with_duration(PulseSpec spec, double duration);

/// Closed-form amplitude of a built-in shape at time t (the mean of the two
/// limits exactly at a step).
double pulse_amplitude(const PulseSpec& spec, double t);

/// Interval outside of which the pulse weight is below 1e-10 (the rising
/// exponential is cut where its amplitude drops to 1e-7 of the peak).
struct Support {
  double lo;
  double hi;
};
Support pulse_support(const PulseSpec& spec);

/// Step sizing and padding for default grids. The step is
/// min(T / points_per_duration, 1 / points_per_unit).
struct GridPolicy {
  double points_per_duration = 2000.0;
  double points_per_unit = 400.0;
  double lead = 0.5;   // padding before the pulse support
  double tail = 20.0;  // padding after it, for the dipole decay

  GridPolicy refined(double factor) const;
};

/// Covers [support.lo - lead, support.hi + tail]. t = 0 is always a node;
/// for the rectangular pulse t = -T is one too.
TimeGrid default_grid_for(const PulseSpec& spec, const GridPolicy& policy = {});

/// Samples the pulse. Built-in steps that fall on a node are recorded as
/// jumps. Custom shapes are linearly interpolated and renormalised to unit
/// norm. Throws unsupported_span if the grid misses part of the support.
ComplexSignal sample_pulse(const PulseSpec& spec, const TimeGrid& grid);

}  // namespace pulsegate
