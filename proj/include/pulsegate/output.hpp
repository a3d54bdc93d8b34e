#pragma once

#include "pulsegate/bloch.hpp"
#include "pulsegate/signal.hpp"

namespace pulsegate {

/// Linear and third-order output pulse shapes:
/// b_out = alpha b1 + alpha |alpha|^2 b3.
struct OutputPair {
  ComplexSignal b1;
  ComplexSignal b3;
};

/// Input-output relation applied order by order:
///   b1 = b_in + i sqrt(2 Gamma) sigma1,   b3 = i sqrt(2 Gamma) sigma3.
/// Throws norm_violation if |norm(b1) - 1| > 1e-4, which means the grid
/// misses part of the decay tail or the step is far too coarse.
OutputPair assemble_outputs(const ComplexSignal& b_in, const ResponseChain& chain, const SystemParams& params);

/// Truncated semiclassical output alpha b1 + alpha |alpha|^2 b3.
ComplexSignal semiclassical_output(const OutputPair& pair, complex alpha);

}  // namespace pulsegate
