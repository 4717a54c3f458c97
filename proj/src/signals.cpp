#include "cosim/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cosim {

namespace {

// Integral of s * psi(s) over [-1, 1].
constexpr double kSwitchFirstMoment = 4.0 / 9.0;

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

void check_window(const Interval& w, const char* where) {
  if (!std::isfinite(w.start) || !std::isfinite(w.end) || !(w.start < w.end)) {
    throw std::invalid_argument(std::string(where) + ": degenerate interval");
  }
}

}  // namespace

ExtrapolantSegment::ExtrapolantSegment(double anchor, double c0, double c1, Interval window)
    : anchor_(anchor), c0_(c0), c1_(c1), window_(window) {
  check_window(window, "ExtrapolantSegment");
}

double ExtrapolantSegment::integral() const {
  const double mid = 0.5 * (window_.start + window_.end);
  return window_.width() * (c0_ + c1_ * (mid - anchor_));
}

ExtrapolantSegment extrapolate(std::span<const SamplePoint> history, int order, Interval interval) {
  if (history.empty()) throw std::invalid_argument("extrapolate: empty history");
  if (order != 0 && order != 1) throw std::invalid_argument("extrapolate: order must be 0 or 1");
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (!(history[i].t > history[i - 1].t)) {
      throw std::invalid_argument("extrapolate: sample times must be strictly increasing");
    }
  }
  const SamplePoint& last = history.back();
  if (!std::isfinite(last.t) || !std::isfinite(last.value)) {
    throw std::invalid_argument("extrapolate: non-finite sample");
  }
  if (!same_time(interval.start, last.t)) {
    throw std::invalid_argument("extrapolate: interval must begin at the last sample time");
  }
  if (order == 0 || history.size() == 1) return ExtrapolantSegment(last.t, last.value, 0.0, interval);
  const SamplePoint& before = history[history.size() - 2];
  const double slope = (last.value - before.value) / (last.t - before.t);
  return ExtrapolantSegment(last.t, last.value, slope, interval);
}

ExtrapolantSegment prolong(const ExtrapolantSegment& segment, Interval interval) {
  if (!same_time(interval.start, segment.window().end)) {
    throw std::invalid_argument("prolong: new window must start where the old one ended");
  }
  return ExtrapolantSegment(segment.anchor(), segment(segment.anchor()), segment.slope(), interval);
}

InputRealization::InputRealization(Interval interval, ExtrapolantSegment base, std::optional<ExtrapolantSegment> prev,
                                   std::optional<IntervalShape> blend, std::vector<Correction> corrections)
    : interval_(interval),
      base_(std::move(base)),
      prev_(std::move(prev)),
      blend_(std::move(blend)),
      corrections_(std::move(corrections)) {
  check_window(interval, "InputRealization");
  if (blend_) {
    if (!prev_) throw std::invalid_argument("InputRealization: switching needs a previous extrapolant");
    if (blend_->kind() != ShapeKind::IntegralOfHatSwitch) {
      throw std::invalid_argument("InputRealization: blend shape must be a switch");
    }
  }
}

double InputRealization::signal(double t) const {
  if (!blend_) return base_(t);
  const double w = (*blend_)(t);
  return (1.0 - w) * (*prev_)(t) + w * base_(t);
}

double InputRealization::correction(double t) const {
  double sum = 0.0;
  for (const auto& c : corrections_) sum += c.amount * c.shape(t);
  return sum;
}

double InputRealization::integrate(bool with_corrections) const {
  double total = 0.0;
  if (!blend_) {
    total = base_.integral();
  } else {
    // prev + psi * (base - prev); the difference is affine, so only the
    // zeroth and first moments of psi over [-1, 1] are needed.
    const double half = 0.5 * interval_.width();
    const double mid = 0.5 * (interval_.start + interval_.end);
    const double diff_mid = base_(mid) - (*prev_)(mid);
    const double diff_slope = base_.slope() - prev_->slope();
    total = prev_->integral() + half * (diff_mid + diff_slope * half * kSwitchFirstMoment);
  }
  if (with_corrections) total += correction_integral();
  return total;
}

double InputRealization::correction_integral() const {
  double sum = 0.0;
  for (const auto& c : corrections_) sum += c.amount * c.shape.integral(interval_.start, interval_.end);
  return sum;
}

InputRealization realize(const ExtrapolantSegment* prev, const ExtrapolantSegment& base, bool smoothing,
                         std::vector<Correction> corrections, Interval interval) {
  check_window(interval, "realize");
  if (!same_time(base.window().start, interval.start) || !same_time(base.window().end, interval.end)) {
    throw std::invalid_argument("realize: base extrapolant window does not match the interval");
  }
  if (!smoothing) return InputRealization(interval, base, std::nullopt, std::nullopt, std::move(corrections));
  if (prev == nullptr) throw std::invalid_argument("realize: smoothing on but no switch source (previous extrapolant)");
  std::optional<ExtrapolantSegment> previous = *prev;
  if (!same_time(prev->window().start, interval.start)) previous = prolong(*prev, interval);
  return InputRealization(interval, base, previous, place_on_interval(ShapeKind::IntegralOfHatSwitch, interval.start,
                                                                      interval.end),
                          std::move(corrections));
}

}  // namespace cosim
