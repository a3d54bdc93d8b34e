#include "pulsegate/bloch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsegate {

namespace {

void require_params(const SystemParams& params) {
  if (!std::isfinite(params.gamma) || !(params.gamma > 0.0)) {
    throw Error(ErrorKind::invalid_range, "relaxation rate Gamma must be positive");
  }
}

// phi1(x) = (1 - e^-x)/x and phi2(x) = (e^-x - 1 + x)/x^2, series near 0.
double phi1(double x) { return x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x; }

double phi2(double x) {
  if (x < 1e-2) {
    // 1/2 - x/6 + x^2/24 - x^3/120 + x^4/720 - x^5/5040
    return 0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0 + x * (-1.0 / 120.0 + x * (1.0 / 720.0 - x / 5040.0))));
  }
  return (std::expm1(-x) + x) / (x * x);
}

}  // namespace

ComplexSignal integrate_relaxation(const ComplexSignal& drive, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorKind::invalid_range, "relaxation rate must be positive");
  const TimeGrid& grid = drive.grid();
  const double h = grid.dt();
  const double x = rate * h;
  const double decay = std::exp(-x);
  // Step weights for the drive at the start (w0) and end (w1) of an interval.
  const double w1 = h * phi2(x);
  const double w0 = h * phi1(x) - w1;

  const auto d = drive.values();
  const std::size_t n = d.size();
  std::vector<complex> y(n);
  const bool smooth = drive.jumps().empty();
  double yr = 0.0;
  double yi = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const complex a = smooth ? d[i] : drive.right_limit(i);
    const complex b = smooth ? d[i + 1] : drive.left_limit(i + 1);
    yr = decay * yr + w0 * a.real() + w1 * b.real();
    yi = decay * yi + w0 * a.imag() + w1 * b.imag();
    y[i + 1] = {yr, yi};
  }
  return ComplexSignal(grid, std::move(y));
}

ComplexSignal linear_response(const ComplexSignal& b_in, const SystemParams& params) {
  require_params(params);
  const complex coupling(0.0, std::sqrt(2.0 * params.gamma));
  return integrate_relaxation(coupling * b_in, params.gamma);
}

ComplexSignal second_order_excitation(const ComplexSignal& sigma1) {
  return map(sigma1, [](complex s) { return complex(std::norm(s), 0.0); });
}

ComplexSignal third_order_response(const ComplexSignal& b_in, const ComplexSignal& sigmaz2,
                                   const SystemParams& params) {
  require_params(params);
  const complex coupling(0.0, std::sqrt(2.0 * params.gamma));
  // Linear response to the saturation-modified pulse -2 b_in sigmaz2.
  const ComplexSignal modified =
      zip(b_in, sigmaz2, [coupling](complex b, complex z) { return -2.0 * coupling * b * z.real(); });
  return integrate_relaxation(modified, params.gamma);
}

ResponseChain response_chain(const ComplexSignal& b_in, const SystemParams& params) {
  ComplexSignal sigma1 = linear_response(b_in, params);
  ComplexSignal sigmaz2 = second_order_excitation(sigma1);
  ComplexSignal sigma3 = third_order_response(b_in, sigmaz2, params);
  return {std::move(sigma1), std::move(sigmaz2), std::move(sigma3)};
}

FullBlochState full_bloch(const ComplexSignal& b_in, complex alpha, const SystemParams& params) {
  require_params(params);
  const TimeGrid& grid = b_in.grid();
  const std::size_t n = grid.size();
  const double h = grid.dt();
  const double g = params.gamma;
  const double c = std::sqrt(2.0 * g);

  struct State {
    complex s;
    double z;
  };
  auto rhs = [&](const State& st, complex d) -> State {
    const complex ds = -g * st.s - complex(0.0, 2.0 * c) * d * st.z;
    // i c (d s* - d* s) = -2 c Im(d s*)
    const double dz = -2.0 * g * (st.z + 0.5) - 2.0 * c * (d * std::conj(st.s)).imag();
    return {ds, dz};
  };
  auto axpy = [](const State& st, double a, const State& k) -> State {
    return {st.s + a * k.s, st.z + a * k.z};
  };

  std::vector<complex> s(n);
  std::vector<double> z(n);
  State st{{0.0, 0.0}, -0.5};
  z[0] = st.z;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const complex d0 = alpha * b_in.right_limit(i);
    const complex d1 = alpha * b_in.left_limit(i + 1);
    const complex dm = 0.5 * (d0 + d1);
    const State k1 = rhs(st, d0);
    const State k2 = rhs(axpy(st, 0.5 * h, k1), dm);
    const State k3 = rhs(axpy(st, 0.5 * h, k2), dm);
    const State k4 = rhs(axpy(st, h, k3), d1);
    st.s += (h / 6.0) * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
    st.z += (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    if (!(std::abs(st.z) <= 0.5 + 1e-6) || !std::isfinite(std::abs(st.s))) {
      std::ostringstream msg;
      msg << "|<sz>| = " << std::abs(st.z) << " at t = " << grid.time(i + 1)
          << "; the time step " << h << " is too coarse for alpha = " << std::abs(alpha);
      throw Error(ErrorKind::step_instability, msg.str());
    }
    s[i + 1] = st.s;
    z[i + 1] = st.z;
  }
  return {ComplexSignal(grid, std::move(s)), std::move(z), alpha};
}

ComplexSignal bloch_output(const ComplexSignal& b_in, const FullBlochState& state,
                           const SystemParams& params) {
  require_params(params);
  const complex coupling(0.0, std::sqrt(2.0 * params.gamma));
  const complex alpha = state.alpha;
  return zip(b_in, state.sigma_minus,
             [alpha, coupling](complex b, complex s) { return alpha * b + coupling * s; });
}

PerturbativeEstimate perturbative_extraction(const ComplexSignal& b_in, const SystemParams& params,
                                             std::span<const double> alphas) {
  for (double a : alphas) {
    if (!(a > 0.0) || a > 0.1) {
      std::ostringstream msg;
      msg << "fit amplitudes must lie in (0, 0.1] (got " << a << ")";
      throw Error(ErrorKind::invalid_range, msg.str());
    }
  }
  std::vector<double> u;
  for (double a : alphas) u.push_back(a * a);
  std::vector<double> distinct = u;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double p, double q) { return std::abs(p - q) <= 1e-12 * q; }),
                 distinct.end());
  if (distinct.size() < 2) {
    throw Error(ErrorKind::ill_conditioned_fit, "need at least two distinct amplitudes to separate b1 and b3");
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(u.size());
  const Eigen::Index cols = distinct.size() >= 3 ? 3 : 2;
  const double u_max = distinct.back();
  Eigen::MatrixXd design(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double x = u[static_cast<std::size_t>(k)] / u_max;
    for (Eigen::Index p = 0; p < cols; ++p) design(k, p) = std::pow(x, static_cast<double>(p));
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < cols) throw Error(ErrorKind::ill_conditioned_fit, "amplitude design matrix is rank deficient");
  const Eigen::MatrixXd weights = qr.solve(Eigen::MatrixXd::Identity(rows, rows));

  ComplexSignal b1(b_in.grid());
  ComplexSignal b3(b_in.grid());
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double a = alphas[static_cast<std::size_t>(k)];
    const ComplexSignal y = complex(1.0 / a, 0.0) * bloch_output(b_in, full_bloch(b_in, a, params), params);
    b1 = b1 + complex(weights(0, k), 0.0) * y;
    b3 = b3 + complex(weights(1, k) / u_max, 0.0) * y;
  }
  return {std::move(b1), std::move(b3)};
}

}  // namespace pulsegate
