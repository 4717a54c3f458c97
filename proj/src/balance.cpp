#include "cosim/balance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cosim {

std::string_view to_string(CorrectionPolicy policy) {
  switch (policy) {
    case CorrectionPolicy::None: return "none";
    case CorrectionPolicy::Classic1: return "classic1";
    case CorrectionPolicy::Smooth1: return "smooth1";
    case CorrectionPolicy::Smooth2: return "smooth2";
    case CorrectionPolicy::Smooth4: return "smooth4";
    case CorrectionPolicy::SplitEarly: return "split-early";
  }
  return "unknown";
}

CorrectionPolicy parse_policy(std::string_view name) {
  for (auto p : {CorrectionPolicy::None, CorrectionPolicy::Classic1, CorrectionPolicy::Smooth1,
                 CorrectionPolicy::Smooth2, CorrectionPolicy::Smooth4, CorrectionPolicy::SplitEarly}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown correction policy '" + std::string(name) + "'");
}

double step_error(double true_integral, double used_integral) { return true_integral - used_integral; }

BalanceError split_error(double true_integral, double ext_integral, double smoothed_integral, int step_index) {
  BalanceError e;
  e.step_index = step_index;
  e.bc_part = true_integral - ext_integral;
  e.switch_part = ext_integral - smoothed_integral;
  e.total = e.bc_part + e.switch_part;
  return e;
}

void BalanceLedger::add(double amount, ShapeKind kind, double start, double end, int step, CorrectionKind type) {
  if (!std::isfinite(amount)) throw std::invalid_argument("BalanceLedger: non-finite correction amount");
  entries_.push_back(CorrectionEntry{amount, place_on_interval(kind, start, end), step, type});
}

void BalanceLedger::schedule(const BalanceError& error, double t_now, double macro_step, CorrectionPolicy policy) {
  if (!(macro_step > 0.0)) throw std::invalid_argument("BalanceLedger::schedule: macro step must be positive");
  const int step = error.step_index;
  switch (policy) {
    case CorrectionPolicy::None:
      return;
    case CorrectionPolicy::Classic1:
      add(error.total, ShapeKind::Box, t_now, t_now + macro_step, step, CorrectionKind::Classic);
      return;
    case CorrectionPolicy::Smooth1:
      add(error.total, ShapeKind::Poly6Hat, t_now, t_now + macro_step, step, CorrectionKind::Classic);
      return;
    case CorrectionPolicy::Smooth2:
      add(error.total, ShapeKind::TwoIntervalHat, t_now, t_now + 2.0 * macro_step, step, CorrectionKind::Classic);
      return;
    case CorrectionPolicy::Smooth4:
      add(error.total, ShapeKind::TwoIntervalHat, t_now, t_now + 4.0 * macro_step, step, CorrectionKind::Classic);
      return;
    case CorrectionPolicy::SplitEarly:
      add(error.bc_part, ShapeKind::TwoIntervalHat, t_now, t_now + 2.0 * macro_step, step, CorrectionKind::BcPart);
      return;
  }
  throw std::invalid_argument("BalanceLedger::schedule: unknown policy");
}

void BalanceLedger::schedule_switch_part(double amount, double t_prev, double macro_step, int step_index) {
  if (!(macro_step > 0.0)) throw std::invalid_argument("BalanceLedger: macro step must be positive");
  add(amount, ShapeKind::TwoIntervalHat, t_prev, t_prev + 2.0 * macro_step, step_index, CorrectionKind::SwitchPart);
}

double BalanceLedger::correction_at(double t) const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    if (t >= e.shape.t_start() && t < e.shape.t_end()) sum += e.amount * e.shape(t);
  }
  return sum;
}

std::vector<Correction> BalanceLedger::active_on(double a, double b) const {
  std::vector<Correction> out;
  for (const auto& e : entries_) {
    if (e.shape.overlaps(a, b)) out.push_back(Correction{e.amount, e.shape});
  }
  return out;
}

ClosureReport BalanceLedger::closure_report(double t_end) const {
  ClosureReport r;
  for (const auto& e : entries_) {
    r.scheduled += e.amount;
    if (e.shape.t_start() < t_end) {
      r.delivered += e.amount * e.shape.integral(e.shape.t_start(), std::min(t_end, e.shape.t_end()));
    }
  }
  r.residual = r.scheduled - r.delivered;
  return r;
}

double BalanceLedger::scheduled() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.amount;
  return s;
}

}  // namespace cosim
