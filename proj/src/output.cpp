#include "pulsegate/output.hpp"

#include <cmath>
#include <sstream>

namespace pulsegate {

OutputPair assemble_outputs(const ComplexSignal& b_in, const ResponseChain& chain, const SystemParams& params) {
  require_same_grid(b_in, chain.sigma1);
  require_same_grid(b_in, chain.sigma3);
  if (!(params.gamma > 0.0)) throw Error(ErrorKind::invalid_range, "relaxation rate Gamma must be positive");
  const complex coupling(0.0, std::sqrt(2.0 * params.gamma));

  ComplexSignal b1 = zip(b_in, chain.sigma1, [coupling](complex b, complex s) { return b + coupling * s; });
  ComplexSignal b3 = coupling * chain.sigma3;

  const double norm = norm_sq(b1);
  if (!(std::abs(norm - 1.0) <= 1e-4)) {
    std::ostringstream msg;
    msg << "linear output norm " << norm << " deviates from 1 by more than 1e-4 (grid ["
        << b_in.grid().t_start() << ", " << b_in.grid().t_end() << "], dt " << b_in.grid().dt() << ")";
    throw Error(ErrorKind::norm_violation, msg.str());
  }
  return {std::move(b1), std::move(b3)};
}

ComplexSignal semiclassical_output(const OutputPair& pair, complex alpha) {
  const complex cubic = alpha * std::norm(alpha);
  return zip(pair.b1, pair.b3, [alpha, cubic](complex lin, complex nl) { return alpha * lin + cubic * nl; });
}

}  // namespace pulsegate
