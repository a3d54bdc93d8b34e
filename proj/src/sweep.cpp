#include "pulsegate/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace pulsegate {

namespace {

void require_gamma_t(double gamma_t) {
  if (!(gamma_t >= kMinGammaT && gamma_t <= kMaxGammaT)) {
    std::ostringstream msg;
    msg << "gamma_t = " << gamma_t << " is outside the supported range [" << kMinGammaT << ", "
        << kMaxGammaT << "]";
    throw Error(ErrorKind::invalid_range, msg.str());
  }
}

SweepRow make_row(double gamma_t, const OutputDecomposition& d) {
  return {gamma_t,  d.c11.real(), d.c11.imag(),       std::norm(d.c11),
          d.c12_sq, d.cr_sq,      d.overlap.real(), d.overlap.imag()};
}

[[noreturn]] void rethrow_at(const Error& e, double gamma_t) {
  std::ostringstream msg;
  msg << "at gamma_t = " << gamma_t << ": " << e.what();
  throw Error(e.kind(), msg.str());
}

double c12_sq_at(const PulseSpec& shape, double log_gt, const SweepOptions& options) {
  return run_point(shape, std::exp(log_gt), options).c12_sq;
}

}  // namespace

PointResult evaluate_point(const PulseSpec& spec, const SweepOptions& options) {
  const SystemParams params{};
  for (int k = 0;; ++k) {
    const TimeGrid grid = default_grid_for(spec, options.grid.refined(std::ldexp(1.0, k)));
    ComplexSignal b_in = sample_pulse(spec, grid);
    ResponseChain chain = response_chain(b_in, params);
    OutputPair pair = assemble_outputs(b_in, chain, params);
    const double norm_error = std::abs(norm_sq(pair.b1) - 1.0);
    if (norm_error > options.norm_target && k < options.max_refinements) continue;

    OutputDecomposition decomposition = decompose(pair);
    const LimitReport limits = check_quantum_limit(pair, decomposition.c12_sq);
    const SweepRow row = make_row(spec.duration, decomposition);
    return {spec,   std::move(b_in), std::move(chain), std::move(pair), std::move(decomposition),
            limits, row,             k,                norm_error};
  }
}

SweepRow run_point(const PulseSpec& shape, double gamma_t, const SweepOptions& options) {
  require_gamma_t(gamma_t);
  try {
    return evaluate_point(with_duration(shape, gamma_t), options).row;
  } catch (const Error& e) {
    rethrow_at(e, gamma_t);
  }
}

std::vector<SweepRow> sweep(const PulseSpec& shape, double gt_min, double gt_max, std::size_t n_points,
                            bool log_spaced, const SweepOptions& options) {
  if (!(gt_min > 0.0) || !(gt_max > gt_min) || n_points < 2) {
    std::ostringstream msg;
    msg << "sweep needs 0 < from < to and at least two points (got from=" << gt_min << ", to=" << gt_max
        << ", n=" << n_points << ")";
    throw Error(ErrorKind::invalid_range, msg.str());
  }
  require_gamma_t(gt_min);
  require_gamma_t(gt_max);

  std::vector<double> gts(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n_points - 1);
    gts[i] = log_spaced ? std::exp(std::log(gt_min) + f * (std::log(gt_max) - std::log(gt_min)))
                        : gt_min + f * (gt_max - gt_min);
  }
  gts.front() = gt_min;
  gts.back() = gt_max;

  std::vector<SweepRow> rows(n_points);
  std::vector<std::exception_ptr> errors(n_points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_points; i = next++) {
      try {
        rows[i] = run_point(shape, gts[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_points)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

PeakResult find_peak_c12(const PulseSpec& shape, double gt_lo, double gt_hi, const SweepOptions& options) {
  if (!(gt_lo > 0.0) || !(gt_hi > gt_lo)) {
    throw Error(ErrorKind::invalid_range, "peak bracket needs 0 < lo < hi");
  }
  constexpr std::size_t kScan = 9;
  const std::vector<SweepRow> scan = sweep(shape, gt_lo, gt_hi, kScan, true, options);
  const auto best = std::max_element(scan.begin(), scan.end(),
                                     [](const SweepRow& a, const SweepRow& b) { return a.c12_sq < b.c12_sq; });
  const std::size_t j = static_cast<std::size_t>(best - scan.begin());
  if (j == 0 || j + 1 == kScan) {
    std::ostringstream msg;
    msg << "|C12|^2 is largest at the bracket end gamma_t = " << best->gamma_t << " in [" << gt_lo << ", "
        << gt_hi << "]";
    throw Error(ErrorKind::no_peak, msg.str());
  }

  // Golden-section search for the maximum on log(gamma_t).
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double tol = std::log1p(1e-3);
  double a = std::log(scan[j - 1].gamma_t);
  double b = std::log(scan[j + 1].gamma_t);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = c12_sq_at(shape, x1, options);
  double f2 = c12_sq_at(shape, x2, options);
  while (b - a > tol) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = c12_sq_at(shape, x1, options);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = c12_sq_at(shape, x2, options);
    }
  }
  const double gt_star = std::exp(0.5 * (a + b));
  const SweepRow at_peak = run_point(shape, gt_star, options);
  return {shape.shape, gt_star, at_peak.c12_sq, complex(at_peak.c11_re, at_peak.c11_im)};
}

ModeShapes mode_shapes_at(const PulseSpec& shape, double gamma_t, const SweepOptions& options) {
  require_gamma_t(gamma_t);
  PointResult r = [&] {
    try {
      return evaluate_point(with_duration(shape, gamma_t), options);
    } catch (const Error& e) {
      rethrow_at(e, gamma_t);
    }
  }();
  if (!r.decomposition.psi2) {
    std::ostringstream msg;
    msg << "psi2 is undefined at gamma_t = " << gamma_t << " (no component of b3 orthogonal to b1)";
    throw Error(ErrorKind::undefined_mode, msg.str());
  }
  return {std::move(r.b_in), std::move(r.decomposition.psi1), std::move(*r.decomposition.psi2)};
}

}  // namespace pulsegate
