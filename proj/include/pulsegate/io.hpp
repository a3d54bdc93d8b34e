#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pulsegate/sweep.hpp"

namespace pulsegate::io {

inline constexpr std::string_view kSweepHeader = "gamma_t,c11_re,c11_im,c11_sq,c12_sq,cr_sq,overlap_re,overlap_im";

/// Shortest round-trip form of x with 17 significant digits.
std::string format_double(double x);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Named columns sampled on a shared grid. Every signal contributes
/// <name>_re and <name>_im; rows are emitted every `stride` nodes (the last
/// node is always included).
struct NamedSignal {
  std::string name;
  const ComplexSignal* signal;
};
void write_signals_csv(std::ostream& out, const std::vector<NamedSignal>& columns, std::size_t stride = 1);

struct SignalTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
SignalTable read_signals_csv(std::istream& in);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pulsegate::io
