#include "pulsegate/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pulsegate::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_double(r.gamma_t) << ',' << format_double(r.c11_re) << ',' << format_double(r.c11_im) << ','
        << format_double(r.c11_sq) << ',' << format_double(r.c12_sq) << ',' << format_double(r.cr_sq) << ','
        << format_double(r.overlap_re) << ',' << format_double(r.overlap_im) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse_error, "empty sweep file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepHeader) throw Error(ErrorKind::parse_error, "unexpected sweep header '" + line + "'");

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 8) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    double v[8];
    for (std::size_t k = 0; k < 8; ++k) v[k] = parse_cell(cells[k], line_no);
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  return rows;
}

void write_signals_csv(std::ostream& out, const std::vector<NamedSignal>& columns, std::size_t stride) {
  if (columns.empty()) throw Error(ErrorKind::invalid_range, "no signals to write");
  if (stride == 0) stride = 1;
  const ComplexSignal& first = *columns.front().signal;
  for (const auto& c : columns) require_same_grid(first, *c.signal);

  out << 't';
  for (const auto& c : columns) out << ',' << c.name << "_re," << c.name << "_im";
  out << '\n';

  const TimeGrid& grid = first.grid();
  const std::size_t n = grid.size();
  auto emit = [&](std::size_t i) {
    out << format_double(grid.time(i));
    for (const auto& c : columns) {
      const complex v = (*c.signal)[i];
      out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    out << '\n';
  };
  std::size_t i = 0;
  for (; i < n; i += stride) emit(i);
  if (i - stride != n - 1) emit(n - 1);
}

SignalTable read_signals_csv(std::istream& in) {
  SignalTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse_error, "empty signals file");
  table.header = split_csv(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": column count mismatch");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  try {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::io_error, "cannot write '" + tmp.string() + "'");
      out << contents;
      out.flush();
      if (!out) throw Error(ErrorKind::io_error, "write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::io_error, e.what());
  }
}

}  // namespace pulsegate::io
