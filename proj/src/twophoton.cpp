#include "pulsegate/twophoton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsegate {

namespace {

constexpr double kUnphysicalTolerance = 1e-4;
constexpr double kUndefinedModeNorm = 1e-8;
constexpr double kLimitTolerance = 1e-6;

double clamp_tiny_negative(double x) { return (x < 0.0 && x > -kClampThreshold) ? 0.0 : x; }

struct Projection {
  ComplexSignal orthogonal;
  double norm;
};

Projection project_out_b1(const OutputPair& pair) {
  // Dividing by <b1|b1> keeps the remainder orthogonal to b1 to rounding
  // even when the discrete norm of b1 is off by the quadrature error.
  const complex coeff = inner_product(pair.b1, pair.b3) / norm_sq(pair.b1);
  ComplexSignal g = zip(pair.b3, pair.b1, [coeff](complex nl, complex lin) { return nl - coeff * lin; });
  const double norm = std::sqrt(std::max(0.0, norm_sq(g)));
  return {std::move(g), norm};
}

}  // namespace

complex compute_c11(const OutputPair& pair) { return 1.0 + inner_product(pair.b1, pair.b3); }

double compute_c12_sq(const OutputPair& pair, complex c11) {
  const double c12_sq = clamp_tiny_negative(2.0 * (norm_sq(pair.b3) - std::norm(c11 - 1.0)));
  if (std::norm(c11) + c12_sq > 1.0 + kUnphysicalTolerance) {
    std::ostringstream msg;
    msg << "|C11|^2 + |C12|^2 = " << std::norm(c11) + c12_sq << " exceeds 1";
    throw Error(ErrorKind::unphysical_decomposition, msg.str());
  }
  return c12_sq;
}

double compute_cr_sq(complex c11, double c12_sq) {
  const double cr_sq = clamp_tiny_negative(1.0 - std::norm(c11) - c12_sq);
  if (cr_sq < -kUnphysicalTolerance) {
    std::ostringstream msg;
    msg << "|Cr|^2 = " << cr_sq << " is negative";
    throw Error(ErrorKind::unphysical_decomposition, msg.str());
  }
  return cr_sq;
}

ComplexSignal extract_psi2(const OutputPair& pair) {
  Projection p = project_out_b1(pair);
  if (!(p.norm > kUndefinedModeNorm)) {
    std::ostringstream msg;
    msg << "b3 has no component orthogonal to b1 (norm " << p.norm << "); psi2 is undefined";
    throw Error(ErrorKind::undefined_mode, msg.str());
  }
  // <g|b3> = <g|g> is already real and positive, so g / |g| carries the phase convention.
  return complex(1.0 / p.norm, 0.0) * p.orthogonal;
}

ModeExpectations coherent_expectations(complex alpha, complex c11, double c12) {
  const complex cubic = alpha * std::norm(alpha);
  return {alpha + (c11 - 1.0) * cubic, (c12 / std::sqrt(2.0)) * cubic};
}

LimitReport check_quantum_limit(const OutputPair& pair, double c12_sq) {
  const complex overlap = inner_product(pair.b1, pair.b3);
  const double circle_margin = 1.0 - std::abs(overlap + 1.0);
  const double radius = std::sqrt(std::max(0.0, 1.0 - c12_sq));
  const double transfer_margin = -(1.0 - radius) - overlap.real();
  return {overlap, circle_margin, transfer_margin, circle_margin >= -kLimitTolerance,
          transfer_margin >= -kLimitTolerance};
}

OutputDecomposition decompose(const OutputPair& pair) {
  const complex overlap = inner_product(pair.b1, pair.b3);
  const complex c11 = 1.0 + overlap;
  const double c12_sq = compute_c12_sq(pair, c11);
  const double cr_sq = compute_cr_sq(c11, c12_sq);

  std::optional<ComplexSignal> psi2;
  Projection p = project_out_b1(pair);
  if (p.norm > kUndefinedModeNorm) psi2 = complex(1.0 / p.norm, 0.0) * p.orthogonal;

  return {pair.b1, std::move(psi2), c11, std::sqrt(std::max(0.0, c12_sq)), c12_sq, cr_sq, overlap};
}

}  // namespace pulsegate
