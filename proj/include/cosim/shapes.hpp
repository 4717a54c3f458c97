// Hat and switch kernels used to blend extrapolants and to refeed balance
// corrections.
//
// Every kernel lives on the reference interval [-1, 1]. Hats integrate to 1
// there; the switch rises monotonically from 0 at -1 to 1 at +1. An
// IntervalShape maps a kernel affinely onto [t_start, t_end], rescaling hat
// amplitudes by 2 / (t_end - t_start) so the unit integral is preserved.

#pragma once

#include <functional>
#include <string_view>

namespace cosim {

enum class ShapeKind {
  Poly6Hat,             // 35/32 (1 - x^2)^3
  IntegralOfHatSwitch,  // running integral of Poly6Hat
  TwoIntervalHat,       // rising switch, then its mirror image
  SmoothBump,           // exp(-1 / (1 - x^2)), not normalized
  Box,                  // 1/2 on [-1, 1], the classic constant refeed
};

std::string_view to_string(ShapeKind kind);

bool is_hat(ShapeKind kind);

// Reference-coordinate evaluation. Zero for |x| > 1.
double hat_eval(ShapeKind kind, double x);

// psi(x) = integral of Poly6Hat from -1 to x; clamps to 0 / 1 outside.
double switch_eval(double x);

// Closed-form derivative of a polynomial kernel (order 1 or 2).
double shape_derivative(ShapeKind kind, double x, int order);

// Integral of the reference kernel from -1 to x (clamped to [-1, 1]).
// Exact for every kind except SmoothBump, which falls back to quadrature.
double reference_antiderivative(ShapeKind kind, double x);

class IntervalShape {
 public:
  IntervalShape(ShapeKind kind, double t_start, double t_end);

  ShapeKind kind() const { return kind_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double width() const { return t_end_ - t_start_; }

  double to_reference(double t) const;

  // Hats: scaled kernel, zero outside the support.
  // Switch: 0 before t_start, 1 after t_end.
  double operator()(double t) const;

  // Time derivative (order 1 or 2) including the chain-rule factors.
  double derivative(double t, int order) const;

  // Exact integral over [a, b] (a <= b); the portion outside the support
  // contributes nothing for hats.
  double integral(double a, double b) const;

  bool overlaps(double a, double b) const { return t_start_ < b && t_end_ > a; }

 private:
  ShapeKind kind_;
  double t_start_;
  double t_end_;
  double amplitude_;  // 2 / width for hats, 1 for the switch
};

IntervalShape place_on_interval(ShapeKind kind, double t_start, double t_end);

inline constexpr int kDefaultQuadraturePanels = 1024;

// Composite Simpson rule. Throws NumericError on a non-finite sample.
double quadrature(const std::function<double(double)>& f, double a, double b,
                  int panels = kDefaultQuadraturePanels);

}  // namespace cosim
