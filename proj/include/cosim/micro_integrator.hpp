#pragma once

#include <functional>
#include <limits>
#include <span>

namespace cosim {

struct MicroOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 10'000'000;
};

/// Adaptive Dormand-Prince 5(4) pair with local extrapolation.
///
/// advance() lands exactly on t1 and never evaluates the right-hand side
/// outside [t0, t1]. The step-size hint is carried across calls so that
/// consecutive macro intervals do not restart from a cold guess.
class MicroIntegrator {
 public:
  using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

  explicit MicroIntegrator(MicroOptions options = {});

  const MicroOptions& options() const { return options_; }

  // Throws NumericError on step-size underflow, step budget exhaustion or a
  // non-finite state.
  void advance(const Rhs& rhs, std::span<double> y, double t0, double t1, double& step_hint) const;

 private:
  MicroOptions options_;
};

}  // namespace cosim
