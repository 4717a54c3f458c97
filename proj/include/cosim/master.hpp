// Co-simulation master: Jacobi exchange over a fixed macro grid.
//
// Per macro interval [t_{j-1}, t_j] every input channel gets an immutable
// InputRealization built from samples at times <= t_{j-1}, all subsystems
// advance independently, and at t_j the outputs and their step integrals are
// exchanged. Balance errors are measured against those integrals and fed into
// one BalanceLedger per channel.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cosim/balance.hpp"
#include "cosim/micro_integrator.hpp"
#include "cosim/models.hpp"
#include "cosim/signals.hpp"

namespace cosim {

struct CosimConfig {
  Model model = Model::spring_mass();
  double macro_step = 0.2;
  double t_end = 10.0;
  int ext_order = 0;
  bool smoothing = false;
  CorrectionPolicy policy = CorrectionPolicy::None;
  MicroOptions micro;
  int dense_per_step = 20;
  // Advance subsystems of one macro step on separate OpenMP threads.
  bool parallel_subsystems = false;
  // Keep every InputRealization in the record (for inspection of ū itself).
  bool keep_realizations = false;

  // Number of macro steps; throws std::invalid_argument unless H divides
  // t_end within 1e-12.
  long steps() const;
  void validate() const;
};

struct ExchangeRow {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> u_used;
  std::vector<double> dE;
  double E = 0.0;
  double E_ref = 0.0;
};

struct DenseRow {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u_real;
  std::vector<double> corr;
};

// Per-channel balance bookkeeping, one entry per macro step.
struct ChannelBalance {
  std::vector<double> true_integral;
  std::vector<double> used_integral;
  std::vector<double> delivered;  // correction integral actually fed in the step
  std::vector<double> switch_part;
  double scheduled = 0.0;
  ClosureReport closure;
};

struct TrajectoryRecord {
  std::size_t n_states = 0;
  std::size_t n_channels = 0;
  std::vector<ExchangeRow> exchange;
  std::vector<DenseRow> dense;
  std::vector<ChannelBalance> balance;
  std::vector<std::string> warnings;
  // realized[j - 1][k]: input of channel k on [t_{j-1}, t_j]; only filled
  // when CosimConfig::keep_realizations is set.
  std::vector<std::vector<InputRealization>> realized;
};

// A subsystem while it is being simulated: the static spec plus its state and
// the output-integral accumulators of the current macro interval.
class Subsystem {
 public:
  explicit Subsystem(SubsystemSpec spec);

  const SubsystemSpec& spec() const { return spec_; }
  std::span<const double> state() const { return state_; }
  std::span<double> state() { return state_; }
  std::span<const double> accumulators() const { return accum_; }
  std::vector<double> outputs(double t) const;

  double step_hint = 0.0;

 private:
  friend std::vector<std::vector<double>> micro_advance(Subsystem&, std::span<const InputRealization>, double,
                                                        double, const MicroIntegrator&, std::span<const double>);
  SubsystemSpec spec_;
  std::vector<double> state_;
  std::vector<double> accum_;
};

// Advances sub from t0 to t1 with inputs[k] driving input k. Output integrals
// are integrated as extra states and reset at t0. Returns the state at each
// of sample_times (strictly inside (t0, t1), increasing).
std::vector<std::vector<double>> micro_advance(Subsystem& sub, std::span<const InputRealization> inputs, double t0,
                                               double t1, const MicroIntegrator& integrator,
                                               std::span<const double> sample_times = {});

TrajectoryRecord run_cosimulation(const CosimConfig& config);

// Monolithic ground truth from the model's analytic reference, on the same
// grids and with the same record layout.
TrajectoryRecord reference_run(const CosimConfig& config);

}  // namespace cosim
