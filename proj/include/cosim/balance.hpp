// Balance errors and their refeed.
//
// After each macro interval the receiver compares the true integral of the
// exchanged signal (accumulated by the sender) with the integral of what it
// actually used. The difference is scheduled for later delivery as an amount
// times a unit-integral shape. Entries are kept per input channel.

#pragma once

#include <string_view>
#include <vector>

#include "cosim/shapes.hpp"
#include "cosim/signals.hpp"

namespace cosim {

enum class CorrectionPolicy {
  None,
  Classic1,    // constant over the next interval
  Smooth1,     // Poly6Hat over the next interval
  Smooth2,     // TwoIntervalHat over the next two intervals
  Smooth4,     // TwoIntervalHat stretched over the next four intervals
  SplitEarly,  // switching part from t_{j-1}, extrapolation part from t_j
};

std::string_view to_string(CorrectionPolicy policy);
CorrectionPolicy parse_policy(std::string_view name);

enum class CorrectionKind { Classic, BcPart, SwitchPart };

struct BalanceError {
  int step_index = 0;
  double total = 0.0;
  double bc_part = 0.0;
  double switch_part = 0.0;
};

double step_error(double true_integral, double used_integral);

// bc_part = true - ext, switch_part = ext - smoothed; total is their sum so the
// decomposition is an exact floating-point identity.
BalanceError split_error(double true_integral, double ext_integral, double smoothed_integral, int step_index = 0);

struct CorrectionEntry {
  double amount;
  IntervalShape shape;
  int source_step;
  CorrectionKind kind;
};

struct ClosureReport {
  double scheduled = 0.0;
  double delivered = 0.0;
  double residual = 0.0;
};

class BalanceLedger {
 public:
  // Schedules the error measured at exchange time t_now according to policy.
  // Under SplitEarly only bc_part is scheduled here; the switching part goes
  // through schedule_switch_part at the start of the interval.
  void schedule(const BalanceError& error, double t_now, double macro_step, CorrectionPolicy policy);

  // Early refeed of the switching error, known at t_prev = t_{j-1}.
  void schedule_switch_part(double amount, double t_prev, double macro_step, int step_index);

  // Right-continuous sum of amount * shape(t) over all entries.
  double correction_at(double t) const;

  // Entries whose support overlaps [a, b), as realization corrections.
  std::vector<Correction> active_on(double a, double b) const;

  ClosureReport closure_report(double t_end) const;

  double scheduled() const;
  const std::vector<CorrectionEntry>& entries() const { return entries_; }

 private:
  void add(double amount, ShapeKind kind, double start, double end, int step, CorrectionKind type);

  std::vector<CorrectionEntry> entries_;
};

}  // namespace cosim
