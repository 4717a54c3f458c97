#include "cosim/shapes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cosim/errors.hpp"

namespace cosim {

namespace {

void require_finite(double x, const char* where) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(where) + ": non-finite argument");
  }
}

// 35/32 (1 - x^2)^3, the degree-6 hat with double roots of its slope at +-1.
double poly6(double x) {
  const double q = 1.0 - x * x;
  return 35.0 / 32.0 * q * q * q;
}

double poly6_d1(double x) {
  const double q = 1.0 - x * x;
  return -105.0 / 16.0 * x * q * q;
}

double poly6_d2(double x) {
  const double x2 = x * x;
  return -105.0 / 16.0 * (1.0 - x2) * (1.0 - 5.0 * x2);
}

// Running integral of poly6 from -1, valid on [-1, 1].
double psi_poly(double x) {
  const double x2 = x * x;
  return 0.5 + x * (35.0 / 32.0 + x2 * (-35.0 / 32.0 + x2 * (21.0 / 32.0 + x2 * (-5.0 / 32.0))));
}

// Running integral of psi from -1, valid on [-1, 1]; Psi(1) = 1.
double psi_antiderivative(double x) {
  const double x2 = x * x;
  return 35.0 / 256.0 + 0.5 * x +
         x2 * (35.0 / 64.0 + x2 * (-35.0 / 128.0 + x2 * (7.0 / 64.0 + x2 * (-5.0 / 256.0))));
}

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Poly6Hat: return "poly6-hat";
    case ShapeKind::IntegralOfHatSwitch: return "integral-of-hat-switch";
    case ShapeKind::TwoIntervalHat: return "two-interval-hat";
    case ShapeKind::SmoothBump: return "smooth-bump";
    case ShapeKind::Box: return "box";
  }
  return "unknown";
}

bool is_hat(ShapeKind kind) { return kind != ShapeKind::IntegralOfHatSwitch; }

double switch_eval(double x) {
  require_finite(x, "switch_eval");
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return psi_poly(x);
}

double hat_eval(ShapeKind kind, double x) {
  require_finite(x, "hat_eval");
  if (!is_hat(kind)) throw std::invalid_argument("hat_eval: switch kind is not a hat");
  if (std::abs(x) > 1.0) return 0.0;
  switch (kind) {
    case ShapeKind::Poly6Hat: return poly6(x);
    case ShapeKind::TwoIntervalHat: return x < 0.0 ? psi_poly(2.0 * x + 1.0) : psi_poly(1.0 - 2.0 * x);
    case ShapeKind::SmoothBump: return bump(x);
    case ShapeKind::Box: return 0.5;
    case ShapeKind::IntegralOfHatSwitch: break;
  }
  return 0.0;
}

double shape_derivative(ShapeKind kind, double x, int order) {
  require_finite(x, "shape_derivative");
  if (order != 1 && order != 2) throw std::invalid_argument("shape_derivative: order must be 1 or 2");
  if (kind == ShapeKind::SmoothBump) {
    throw std::invalid_argument("shape_derivative: no closed form for smooth-bump");
  }
  if (std::abs(x) > 1.0) return 0.0;
  switch (kind) {
    case ShapeKind::Poly6Hat: return order == 1 ? poly6_d1(x) : poly6_d2(x);
    case ShapeKind::IntegralOfHatSwitch: return order == 1 ? poly6(x) : poly6_d1(x);
    case ShapeKind::TwoIntervalHat:
      if (x < 0.0) {
        const double s = 2.0 * x + 1.0;
        return order == 1 ? 2.0 * poly6(s) : 4.0 * poly6_d1(s);
      } else {
        const double s = 1.0 - 2.0 * x;
        return order == 1 ? -2.0 * poly6(s) : 4.0 * poly6_d1(s);
      }
    case ShapeKind::Box: return 0.0;
    case ShapeKind::SmoothBump: break;
  }
  return 0.0;
}

double reference_antiderivative(ShapeKind kind, double x) {
  require_finite(x, "reference_antiderivative");
  if (kind == ShapeKind::IntegralOfHatSwitch) {
    // psi == 1 past the support, so the integral keeps growing linearly.
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return x;
    return psi_antiderivative(x);
  }
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) x = 1.0;
  switch (kind) {
    case ShapeKind::Poly6Hat: return x >= 1.0 ? 1.0 : psi_poly(x);
    case ShapeKind::TwoIntervalHat:
      if (x >= 1.0) return 1.0;
      return x < 0.0 ? 0.5 * psi_antiderivative(2.0 * x + 1.0) : 1.0 - 0.5 * psi_antiderivative(1.0 - 2.0 * x);
    case ShapeKind::Box: return 0.5 * (x + 1.0);
    case ShapeKind::SmoothBump: return x <= -1.0 ? 0.0 : quadrature(bump, -1.0, x);
    case ShapeKind::IntegralOfHatSwitch: break;
  }
  return 0.0;
}

IntervalShape::IntervalShape(ShapeKind kind, double t_start, double t_end)
    : kind_(kind), t_start_(t_start), t_end_(t_end) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
    throw std::invalid_argument("IntervalShape: degenerate interval [" + std::to_string(t_start) + ", " +
                                std::to_string(t_end) + "]");
  }
  amplitude_ = is_hat(kind) ? 2.0 / (t_end - t_start) : 1.0;
}

double IntervalShape::to_reference(double t) const {
  // Pin the endpoints so boundary values are exact.
  if (t == t_start_) return -1.0;
  if (t == t_end_) return 1.0;
  return (t - 0.5 * (t_start_ + t_end_)) * (2.0 / (t_end_ - t_start_));
}

double IntervalShape::operator()(double t) const {
  const double x = to_reference(t);
  if (kind_ == ShapeKind::IntegralOfHatSwitch) return switch_eval(x);
  return amplitude_ * hat_eval(kind_, x);
}

double IntervalShape::derivative(double t, int order) const {
  const double x = to_reference(t);
  const double chain = order == 1 ? 2.0 / width() : 4.0 / (width() * width());
  return amplitude_ * chain * shape_derivative(kind_, x, order);
}

double IntervalShape::integral(double a, double b) const {
  if (b < a) throw std::invalid_argument("IntervalShape::integral: b < a");
  if (kind_ == ShapeKind::IntegralOfHatSwitch) {
    return 0.5 * width() * (reference_antiderivative(kind_, to_reference(b)) -
                            reference_antiderivative(kind_, to_reference(a)));
  }
  // amplitude * (width / 2) == 1 for hats.
  return reference_antiderivative(kind_, to_reference(b)) - reference_antiderivative(kind_, to_reference(a));
}

IntervalShape place_on_interval(ShapeKind kind, double t_start, double t_end) {
  return IntervalShape(kind, t_start, t_end);
}

double quadrature(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("quadrature: panels must be even and >= 2");
  const double h = (b - a) / panels;
  auto sample = [&](int i) {
    const double t = i == panels ? b : a + i * h;
    const double v = f(t);
    if (!std::isfinite(v)) throw NumericError("quadrature: non-finite sample at t=" + std::to_string(t));
    return v;
  };
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i) {
    (i % 2 ? odd : even) += sample(i);
  }
  return h / 3.0 * (sample(0) + 4.0 * odd + 2.0 * even + sample(panels));
}

}  // namespace cosim
