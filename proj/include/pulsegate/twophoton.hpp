#pragma once

// Two-photon amplitudes from the semiclassical output pair.
//
// The two-photon input state maps onto
//   C11/sqrt(2) a1+ a1+ |0> + C12 a1+ a2+ |0> + Cr |rest>,
// with psi1 = b1 and psi2 the normalised part of b3 orthogonal to b1. In
// that basis b3 = (C11 - 1) psi1 + (C12 / sqrt(2)) psi2.

#include <optional>

#include "pulsegate/output.hpp"

namespace pulsegate {

/// Squared magnitudes in (-kClampThreshold, 0) are reported as 0.
inline constexpr double kClampThreshold = 1e-10;

struct OutputDecomposition {
  ComplexSignal psi1;                 // == b1
  std::optional<ComplexSignal> psi2;  // absent in the linear regime
  complex c11;
  double c12;      // real, >= 0: the phase lives in psi2
  double c12_sq;
  double cr_sq;
  complex overlap;  // integral of conj(b1) b3
};

struct ModeExpectations {
  complex a1;
  complex a2;
};

struct LimitReport {
  complex overlap;
  double circle_margin;    // 1 - |overlap + 1|
  double transfer_margin;  // -(1 - sqrt(1 - |C12|^2)) - Re overlap
  bool circle_ok;
  bool transfer_ok;
  bool ok() const noexcept { return circle_ok && transfer_ok; }
};

/// C11 = 1 + integral conj(b1) b3.
complex compute_c11(const OutputPair& pair);

/// |C12|^2 = 2 (integral |b3|^2 - |C11 - 1|^2). Throws
/// unphysical_decomposition if |C11|^2 + |C12|^2 > 1 + 1e-4.
double compute_c12_sq(const OutputPair& pair, complex c11);

/// |Cr|^2 = 1 - |C11|^2 - |C12|^2. Throws unphysical_decomposition below -1e-4.
double compute_cr_sq(complex c11, double c12_sq);

/// Normalised component of b3 orthogonal to b1, phased so that its
/// coefficient in b3 is real and positive. Throws undefined_mode if that
/// component has norm <= 1e-8.
ComplexSignal extract_psi2(const OutputPair& pair);

/// <a1> = alpha + (C11 - 1) alpha |alpha|^2,  <a2> = (C12 / sqrt(2)) alpha |alpha|^2.
ModeExpectations coherent_expectations(complex alpha, complex c11, double c12);

/// Checks |overlap + 1| <= 1 and Re overlap <= -(1 - sqrt(1 - |C12|^2)),
/// both at tolerance 1e-6. Violations are reported, never thrown.
LimitReport check_quantum_limit(const OutputPair& pair, double c12_sq);

/// Full decomposition; psi2 is left empty when it is undefined.
OutputDecomposition decompose(const OutputPair& pair);

}  // namespace pulsegate
