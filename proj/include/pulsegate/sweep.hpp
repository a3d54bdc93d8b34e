#pragma once

// Pulse-duration sweeps. For a fixed shape the two-photon amplitudes depend
// only on Gamma*T, so every point runs in scaled time (Gamma = 1) with a
// grid derived from its own T.

#include <cstddef>
#include <vector>

#include "pulsegate/pulses.hpp"
#include "pulsegate/twophoton.hpp"

namespace pulsegate {

inline constexpr double kMinGammaT = 1e-3;
inline constexpr double kMaxGammaT = 1e4;

struct SweepRow {
  double gamma_t;
  double c11_re;
  double c11_im;
  double c11_sq;
  double c12_sq;
  double cr_sq;
  double overlap_re;
  double overlap_im;
};

struct PeakResult {
  PulseShape shape;
  double gamma_t_star;
  double c12_sq_star;
  complex c11_at_peak;
};

struct SweepOptions {
  GridPolicy grid;
  /// A point is recomputed on a grid twice as fine while the linear output
  /// norm misses 1 by more than this, at most max_refinements times.
  double norm_target = 5e-7;
  int max_refinements = 2;
  /// Worker threads for sweep(); rows come back in ascending Gamma*T either way.
  unsigned threads = 1;
};

struct PointResult {
  PulseSpec spec;
  ComplexSignal b_in;
  ResponseChain chain;
  OutputPair pair;
  OutputDecomposition decomposition;
  LimitReport limits;
  SweepRow row;
  int refinements;
  double norm_error;  // |norm(b1) - 1|
};

struct ModeShapes {
  ComplexSignal b_in;
  ComplexSignal psi1;
  ComplexSignal psi2;
};

/// Full pipeline for one pulse (its duration is Gamma*T):
/// sample, chain, outputs, decomposition, limit check.
PointResult evaluate_point(const PulseSpec& spec, const SweepOptions& options = {});

/// Throws invalid_range for gamma_t outside [1e-3, 1e4]; solver errors are
/// rethrown with gamma_t in the message.
SweepRow run_point(const PulseSpec& shape, double gamma_t, const SweepOptions& options = {});

/// Default range in the CLI is [0.01, 1000], 121 log-spaced points.
std::vector<SweepRow> sweep(const PulseSpec& shape, double gt_min, double gt_max, std::size_t n_points,
                            bool log_spaced, const SweepOptions& options = {});

/// Locates the |C12|^2 maximum inside [gt_lo, gt_hi]: a 9-point log scan
/// seeds a golden-section search on log(Gamma*T), refined to a relative
/// width of 1e-3. Throws no_peak when the scan maximum sits on a bracket end.
PeakResult find_peak_c12(const PulseSpec& shape, double gt_lo, double gt_hi, const SweepOptions& options = {});

/// psi1 and psi2 at one duration; throws undefined_mode if psi2 is undefined there.
ModeShapes mode_shapes_at(const PulseSpec& shape, double gamma_t, const SweepOptions& options = {});

}  // namespace pulsegate
