#include "cosim/micro_integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cosim/errors.hpp"

namespace cosim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

std::string at_time(const char* what, double t) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t;
  return os.str();
}

}  // namespace

MicroIntegrator::MicroIntegrator(MicroOptions options) : options_(options) {
  if (!(options_.abs_tol > 0.0) || !(options_.rel_tol >= 0.0) || !(options_.max_step > 0.0)) {
    throw std::invalid_argument("MicroIntegrator: tolerances and max step must be positive");
  }
}

void MicroIntegrator::advance(const Rhs& rhs, std::span<double> y, double t0, double t1, double& step_hint) const {
  if (!(t1 > t0)) throw std::invalid_argument("MicroIntegrator::advance: need t1 > t0");
  const std::size_t n = y.size();
  if (n == 0) return;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);
  auto stage = [&](double t, std::vector<double>& out) {
    rhs(t, tmp, out);
  };

  const double span = t1 - t0;
  double h = step_hint > 0.0 ? std::min(step_hint, span) : span * 1e-2;
  h = std::min(h, options_.max_step);

  double t = t0;
  rhs(t, y, k1);
  long steps = 0;
  while (t < t1) {
    if (++steps > options_.max_steps) throw NumericError(at_time("micro integrator: step budget exhausted", t));
    bool last = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw NumericError(at_time("micro integrator: step size underflow", t));

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * kA21 * k1[i];
    stage(t + kC[1] * h, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    stage(t + kC[2] * h, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    stage(t + kC[3] * h, k4);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    }
    stage(t + kC[4] * h, k5);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    }
    const double t_next = last ? t1 : t + h;
    stage(last ? t1 : t + kC[5] * h, k6);
    for (std::size_t i = 0; i < n; ++i) {
      y5[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
    }
    tmp = y5;
    rhs(t_next, tmp, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
      const double scale = options_.abs_tol + options_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!std::isfinite(err)) throw NumericError(at_time("micro integrator: non-finite state", t));

    if (err <= 1.0) {
      t = t_next;
      std::copy(y5.begin(), y5.end(), y.begin());
      k1.swap(k7);
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (!last || step_hint <= 0.0) step_hint = h;
      h = std::min(h * grow, options_.max_step);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw NumericError(at_time("micro integrator: non-finite state", t1));
  }
}

}  // namespace cosim
