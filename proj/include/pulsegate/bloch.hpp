#pragma once

// Two-level atom driven through a one-sided cavity (weak coupling, cavity
// adiabatically eliminated). Equations of motion, with rate Gamma:
//
//   d<s->/dt = -Gamma <s-> - 2i sqrt(2 Gamma) alpha b_in <sz>
//   d<sz>/dt = -2 Gamma (<sz> + 1/2)
//              + i sqrt(2 Gamma) (alpha b_in <s->* - alpha* b_in* <s->)
//
// Expanding in alpha around the ground state gives a chain of linear
// relaxation problems: sigma1 driven by b_in, sigmaz2 = |sigma1|^2, and
// sigma3 driven by -2 b_in sigmaz2.

#include <span>
#include <vector>

#include "pulsegate/signal.hpp"

namespace pulsegate {

struct SystemParams {
  double gamma = 1.0;
};

struct ResponseChain {
  ComplexSignal sigma1;
  ComplexSignal sigmaz2;  // real, >= 0
  ComplexSignal sigma3;
};

struct FullBlochState {
  ComplexSignal sigma_minus;
  std::vector<double> sigma_z;
  complex alpha;
};

struct PerturbativeEstimate {
  ComplexSignal b1;
  ComplexSignal b3;
};

/// Solves y' = -rate * y + drive(t), y(t_start) = 0, treating the drive as
/// piecewise linear between the one-sided node limits. The step uses the
/// exact integrating factor, so piecewise-constant drives are integrated
/// exactly.
ComplexSignal integrate_relaxation(const ComplexSignal& drive, double rate);

/// sigma1' = -Gamma sigma1 + i sqrt(2 Gamma) b_in.
ComplexSignal linear_response(const ComplexSignal& b_in, const SystemParams& params);

/// |sigma1|^2.
ComplexSignal second_order_excitation(const ComplexSignal& sigma1);

/// sigma3' = -Gamma sigma3 - 2i sqrt(2 Gamma) b_in sigmaz2.
ComplexSignal third_order_response(const ComplexSignal& b_in, const ComplexSignal& sigmaz2,
                                   const SystemParams& params);

ResponseChain response_chain(const ComplexSignal& b_in, const SystemParams& params);

/// Classical RK4 on the full nonlinear equations from the ground state
/// (<s-> = 0, <sz> = -1/2). Inside each step the drive is linearly
/// interpolated between one-sided node limits, matching the chain solver.
/// Throws step_instability if |<sz>| exceeds 1/2 + 1e-6 (step too coarse).
FullBlochState full_bloch(const ComplexSignal& b_in, complex alpha, const SystemParams& params);

/// b_out = alpha b_in + i sqrt(2 Gamma) <s->.
ComplexSignal bloch_output(const ComplexSignal& b_in, const FullBlochState& state,
                           const SystemParams& params);

/// Brute-force estimate of b1 and b3 from full nonlinear runs. For every
/// time sample, b_out(alpha)/alpha is fitted by least squares as a
/// polynomial in alpha^2: b1 + alpha^2 b3 with two amplitudes, plus an
/// alpha^4 nuisance term when three or more are given.
/// Throws ill_conditioned_fit for fewer than two distinct amplitudes and
/// invalid_range for amplitudes outside (0, 0.1].
PerturbativeEstimate perturbative_extraction(const ComplexSignal& b_in, const SystemParams& params,
                                             std::span<const double> alphas);

}  // namespace pulsegate
