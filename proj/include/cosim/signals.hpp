// Input realizations: what a receiving subsystem actually sees on one macro
// interval. Built from exchange-time samples by extrapolation, optionally
// blended from the previous extrapolant with the S-shaped switch, plus any
// pending balance corrections.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cosim/shapes.hpp"

namespace cosim {

struct SamplePoint {
  double t;
  double value;
};

struct Interval {
  double start;
  double end;

  double width() const { return end - start; }
};

// value(t) = c0 + c1 * (t - anchor), evaluated on a window [start, end).
// The anchor is the last sample time and never moves when the window does.
class ExtrapolantSegment {
 public:
  ExtrapolantSegment(double anchor, double c0, double c1, Interval window);

  double operator()(double t) const { return c0_ + c1_ * (t - anchor_); }
  double slope() const { return c1_; }
  double anchor() const { return anchor_; }
  const Interval& window() const { return window_; }
  int degree() const { return c1_ == 0.0 ? 0 : 1; }

  // Exact integral over the window.
  double integral() const;

 private:
  double anchor_;
  double c0_;
  double c1_;
  Interval window_;
};

// order 0: hold the last value. order 1: line through the last two samples;
// a single sample falls back to a constant.
ExtrapolantSegment extrapolate(std::span<const SamplePoint> history, int order, Interval interval);

// Same polynomial on the next window; the window must start where the old one
// ended.
ExtrapolantSegment prolong(const ExtrapolantSegment& segment, Interval interval);

struct Correction {
  double amount;
  IntervalShape shape;
};

class InputRealization {
 public:
  // Without a switch the realization is base + corrections. With a switch,
  // prev is blended into base: (1 - psi) prev + psi base.
  InputRealization(Interval interval, ExtrapolantSegment base, std::optional<ExtrapolantSegment> prev,
                   std::optional<IntervalShape> blend, std::vector<Correction> corrections);

  const Interval& interval() const { return interval_; }
  const ExtrapolantSegment& base() const { return base_; }
  const std::optional<ExtrapolantSegment>& prev() const { return prev_; }
  bool smoothed() const { return blend_.has_value(); }
  const std::vector<Correction>& corrections() const { return corrections_; }

  // Smoothed extrapolant without corrections.
  double signal(double t) const;
  double correction(double t) const;
  double operator()(double t) const { return signal(t) + correction(t); }

  // Integral over the interval. The "used" integral for balance purposes is
  // integrate(false); corrections repay past errors and are not part of it.
  double integrate(bool with_corrections) const;
  double correction_integral() const;

 private:
  Interval interval_;
  ExtrapolantSegment base_;
  std::optional<ExtrapolantSegment> prev_;
  std::optional<IntervalShape> blend_;
  std::vector<Correction> corrections_;
};

// Smoothing requires prev. The switch always spans the whole interval.
InputRealization realize(const ExtrapolantSegment* prev, const ExtrapolantSegment& base, bool smoothing,
                         std::vector<Correction> corrections, Interval interval);

}  // namespace cosim
