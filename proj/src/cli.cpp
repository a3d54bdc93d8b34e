#include "pulsegate/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pulsegate/io.hpp"
#include "pulsegate/sweep.hpp"

namespace pulsegate::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kAutoMaxRows = 100000;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string shape;
  std::string pulse_file;
  double points_per_unit = GridPolicy{}.points_per_unit;
  double points_per_duration = GridPolicy{}.points_per_duration;
  double tail = GridPolicy{}.tail;
  unsigned threads = 1;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool allow_all) {
  std::vector<std::string> shapes{"rect", "rising-exp", "sym-exp", "gauss", "custom"};
  if (allow_all) shapes.push_back("all");
  cmd->add_option("--shape", c.shape, "Input pulse shape")->required()->check(CLI::IsMember(shapes));
  cmd->add_option("--pulse-file", c.pulse_file, "Samples for --shape custom: (t/T, value) or (t/T, re, im)");
  cmd->add_option("--points-per-unit", c.points_per_unit, "Grid density per 1/Gamma")->check(CLI::PositiveNumber);
  cmd->add_option("--points-per-duration", c.points_per_duration, "Grid density per pulse duration T")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tail", c.tail, "Decay padding after the pulse, in 1/Gamma")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  cmd->add_option("--out", c.out, "Output path");
}

SweepOptions options_from(const Common& c) {
  SweepOptions o;
  o.grid.points_per_unit = c.points_per_unit;
  o.grid.points_per_duration = c.points_per_duration;
  o.grid.tail = c.tail;
  o.threads = c.threads;
  return o;
}

std::vector<PulseSpec> shapes_from(const Common& c) {
  if (c.shape == "custom") {
    if (c.pulse_file.empty()) throw ConfigError("--shape custom needs --pulse-file");
    try {
      return {make_custom_pulse(load_custom_samples(c.pulse_file))};
    } catch (const Error& e) {
      throw ConfigError(std::string("--pulse-file: ") + e.what());
    }
  }
  if (!c.pulse_file.empty()) throw ConfigError("--pulse-file is only valid with --shape custom");
  if (c.shape == "all") {
    return {make_pulse(PulseShape::rectangular, 1.0), make_pulse(PulseShape::rising_exponential, 1.0),
            make_pulse(PulseShape::symmetric_exponential, 1.0), make_pulse(PulseShape::gaussian, 1.0)};
  }
  return {make_pulse(*parse_shape(c.shape), 1.0)};
}

void require_gamma_t(double gamma_t, const char* flag) {
  if (!(gamma_t >= kMinGammaT && gamma_t <= kMaxGammaT)) {
    std::ostringstream msg;
    msg << flag << " = " << gamma_t << " is outside the supported range [" << kMinGammaT << ", " << kMaxGammaT
        << "]";
    throw ConfigError(msg.str());
  }
}

std::size_t auto_stride(std::size_t n, std::size_t stride) {
  return stride > 0 ? stride : std::max<std::size_t>(1, (n + kAutoMaxRows - 1) / kAutoMaxRows);
}

json row_json(const SweepRow& r) {
  return json{{"gamma_t", r.gamma_t},   {"c11_re", r.c11_re}, {"c11_im", r.c11_im},
              {"c11_sq", r.c11_sq},     {"c12_sq", r.c12_sq}, {"cr_sq", r.cr_sq},
              {"overlap_re", r.overlap_re}, {"overlap_im", r.overlap_im}};
}

json summary_json(const PointResult& r) {
  json j = row_json(r.row);
  j["shape"] = std::string(to_string(r.spec.shape));
  j["c12"] = r.decomposition.c12;
  j["norm_b1"] = norm_sq(r.pair.b1);
  j["circle_margin"] = r.limits.circle_margin;
  j["transfer_margin"] = r.limits.transfer_margin;
  j["limits_ok"] = r.limits.ok();
  j["psi2_defined"] = r.decomposition.psi2.has_value();
  const TimeGrid& g = r.b_in.grid();
  j["grid"] = json{{"t_start", g.t_start()}, {"t_end", g.t_end()}, {"n", g.size()}, {"dt", g.dt()},
                   {"refinements", r.refinements}};
  return j;
}

std::string summary_csv(const json& j) {
  static const char* keys[] = {"shape",  "gamma_t",       "c11_re",          "c11_im",    "c11_sq",
                               "c12_sq", "cr_sq",         "overlap_re",      "overlap_im", "norm_b1",
                               "circle_margin", "transfer_margin", "limits_ok"};
  std::ostringstream out;
  for (std::size_t k = 0; k < std::size(keys); ++k) out << (k ? "," : "") << keys[k];
  out << '\n';
  for (std::size_t k = 0; k < std::size(keys); ++k) {
    const json& v = j.at(keys[k]);
    out << (k ? "," : "");
    if (v.is_string()) out << v.get<std::string>();
    else if (v.is_boolean()) out << (v.get<bool>() ? "true" : "false");
    else out << io::format_double(v.get<double>());
  }
  out << '\n';
  return out.str();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_range:
    case ErrorKind::unsupported_span:
    case ErrorKind::parse_error:
    case ErrorKind::io_error:
      return kConfigError;
    case ErrorKind::no_peak:
      return kNoPeak;
    default:
      return kSolverError;
  }
}

int cmd_respond(const Common& c, double gamma_t, std::size_t stride, std::ostream& out) {
  require_gamma_t(gamma_t, "--gamma-t");
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
  const PulseSpec spec = with_duration(shapes_from(c).front(), gamma_t);
  const PointResult r = evaluate_point(spec, options_from(c));

  const ComplexSignal psi2 = r.decomposition.psi2 ? *r.decomposition.psi2 : ComplexSignal(r.b_in.grid());
  std::ostringstream signals;
  io::write_signals_csv(signals,
                        {{"b_in", &r.b_in}, {"b1", &r.pair.b1}, {"b3", &r.pair.b3}, {"psi1", &r.decomposition.psi1},
                         {"psi2", &psi2}},
                        auto_stride(r.b_in.size(), stride));

  const std::string prefix = c.out.empty() ? "respond" : c.out;
  const json summary = summary_json(r);
  io::write_file_atomic(prefix + "_signals.csv", signals.str());
  if (c.format == "json") {
    io::write_file_atomic(prefix + "_summary.json", summary.dump(2) + "\n");
  } else {
    io::write_file_atomic(prefix + "_summary.csv", summary_csv(summary));
  }
  out << summary.dump(2) << '\n';
  return kSuccess;
}

int cmd_sweep(const Common& c, double from, double to, std::size_t num, bool linear, std::ostream& out) {
  if (!(from > 0.0) || !(to > from)) throw ConfigError("--from and --to need 0 < from < to");
  if (num < 2) throw ConfigError("--num must be at least 2");
  require_gamma_t(from, "--from");
  require_gamma_t(to, "--to");
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");

  const auto specs = shapes_from(c);
  const bool many = specs.size() > 1;
  for (const PulseSpec& spec : specs) {
    const auto rows = sweep(spec, from, to, num, !linear, options_from(c));
    const std::string ext = c.format == "json" ? ".json" : ".csv";
    const std::string name(to_string(spec.shape));
    std::string path;
    if (many) path = (c.out.empty() ? std::string("sweep") : c.out) + "_" + name + ext;
    else path = c.out.empty() ? "sweep_" + name + ext : c.out;

    std::ostringstream body;
    if (c.format == "json") {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(row_json(r));
      body << arr.dump(2) << '\n';
    } else {
      io::write_sweep_csv(body, rows);
    }
    io::write_file_atomic(path, body.str());
    out << "wrote " << rows.size() << " rows to " << path << '\n';
  }
  return kSuccess;
}

json peak_json(const PeakResult& p) {
  return json{{"shape", std::string(to_string(p.shape))},
              {"gamma_t_star", p.gamma_t_star},
              {"c12_sq_star", p.c12_sq_star},
              {"c11_at_peak", json{{"re", p.c11_at_peak.real()}, {"im", p.c11_at_peak.imag()}}}};
}

int cmd_peak(const Common& c, double from, double to, std::ostream& out) {
  if (!(from > 0.0) || !(to > from)) throw ConfigError("--from and --to need 0 < from < to");
  require_gamma_t(from, "--from");
  require_gamma_t(to, "--to");
  const PeakResult p = find_peak_c12(shapes_from(c).front(), from, to, options_from(c));
  const json j = peak_json(p);
  if (!c.out.empty()) io::write_file_atomic(c.out, j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return kSuccess;
}

int cmd_modes(const Common& c, double gamma_t, bool at_peak, double from, double to, std::size_t stride,
              std::ostream& out) {
  const PulseSpec spec = shapes_from(c).front();
  const SweepOptions options = options_from(c);
  if (at_peak) {
    if (!(from > 0.0) || !(to > from)) throw ConfigError("--from and --to need 0 < from < to");
    gamma_t = find_peak_c12(spec, from, to, options).gamma_t_star;
  }
  require_gamma_t(gamma_t, "--gamma-t");
  const ModeShapes m = mode_shapes_at(spec, gamma_t, options);

  std::ostringstream body;
  io::write_signals_csv(body, {{"b_in", &m.b_in}, {"psi1", &m.psi1}, {"psi2", &m.psi2}},
                        auto_stride(m.b_in.size(), stride));
  const std::string path = c.out.empty() ? "modes_" + std::string(to_string(spec.shape)) + ".csv" : c.out;
  io::write_file_atomic(path, body.str());
  out << "wrote mode shapes at gamma_t = " << io::format_double(gamma_t) << " to " << path << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon gate amplitudes of a driven two-level atom from its semiclassical response"};
  app.require_subcommand(1);

  Common respond_c, sweep_c, peak_c, modes_c;
  double respond_gt = 1.0;
  std::size_t respond_stride = 0;
  auto* respond = app.add_subcommand("respond", "Single pulse: signals and two-photon summary");
  add_common(respond, respond_c, false);
  respond_c.format = "json";
  respond->add_option("--gamma-t", respond_gt, "Pulse duration Gamma*T");
  respond->add_option("--format", respond_c.format, "Summary format: csv or json");
  respond->add_option("--stride", respond_stride, "Write every Nth node (0: at most 1e5 rows)");

  double sweep_from = 0.01, sweep_to = 1000.0;
  std::size_t sweep_num = 121;
  bool sweep_linear = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Two-photon amplitudes over a range of Gamma*T");
  add_common(sweep_cmd, sweep_c, true);
  sweep_cmd->add_option("--from", sweep_from, "Smallest Gamma*T");
  sweep_cmd->add_option("--to", sweep_to, "Largest Gamma*T");
  sweep_cmd->add_option("--num", sweep_num, "Number of points");
  sweep_cmd->add_flag("--linear", sweep_linear, "Linear instead of logarithmic spacing");
  sweep_cmd->add_option("--format", sweep_c.format, "csv or json");

  double peak_from = 0.1, peak_to = 10.0;
  auto* peak = app.add_subcommand("peak", "Locate the maximum of |C12|^2");
  add_common(peak, peak_c, false);
  peak->add_option("--from", peak_from, "Bracket start (Gamma*T)");
  peak->add_option("--to", peak_to, "Bracket end (Gamma*T)");

  double modes_gt = 1.0, modes_from = 0.1, modes_to = 10.0;
  bool modes_at_peak = false;
  std::size_t modes_stride = 0;
  auto* modes = app.add_subcommand("modes", "Export psi1 and psi2");
  add_common(modes, modes_c, false);
  modes->add_option("--gamma-t", modes_gt, "Pulse duration Gamma*T");
  modes->add_flag("--at-peak", modes_at_peak, "Use the |C12|^2 peak inside [--from, --to]");
  modes->add_option("--from", modes_from, "Peak bracket start");
  modes->add_option("--to", modes_to, "Peak bracket end");
  modes->add_option("--stride", modes_stride, "Write every Nth node (0: at most 1e5 rows)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (respond->parsed()) return cmd_respond(respond_c, respond_gt, respond_stride, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_c, sweep_from, sweep_to, sweep_num, sweep_linear, out);
    if (peak->parsed()) return cmd_peak(peak_c, peak_from, peak_to, out);
    if (modes->parsed()) {
      return cmd_modes(modes_c, modes_gt, modes_at_peak, modes_from, modes_to, modes_stride, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    err << (code == kConfigError ? "config error: " : code == kNoPeak ? "no peak: " : "solver error: ")
        << e.what() << '\n';
    return code;
  }
  return kConfigError;
}

}  // namespace pulsegate::cli
