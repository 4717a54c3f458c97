// Study harness: convergence orders, energy drift classification and
// exchange-induced oscillation metrics, plus the `cosim` command line.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cosim/master.hpp"
#include "cosim/sweep.hpp"

namespace cosim {

enum class StudyKind { SingleRun, Convergence, EnergyDrift, Oscillation };

struct StudySpec {
  StudyKind kind = StudyKind::SingleRun;
  CosimConfig base;
  // Field name and values; only "H" is supported, and convergence studies
  // accept nothing else.
  std::vector<std::pair<std::string, std::vector<double>>> sweep;

  void validate() const;
  std::vector<double> macro_steps() const;
};

struct EocRow {
  double H = 0.0;
  double err = 0.0;  // max over exchange times of the Euclidean state error
  double eoc = 0.0;  // NaN for the first row or when H did not halve
  bool floor_limited = false;
  bool non_monotone = false;  // error grew by more than 10% on halving
  bool failed = false;
  std::string note;
};

// Max over exchange times of |x_cosim - x_ref|_2. Records must share a grid.
double max_state_error(const TrajectoryRecord& cosim, const TrajectoryRecord& reference);

std::vector<EocRow> convergence_study(const StudySpec& spec, Execution exec = Execution::Serial);

enum class EnergyTrend { Decaying, Bounded, Growing };

inline constexpr double kGrowingEnergyRatio = 1.05;
inline constexpr double kDecayingEnergyRatio = 0.95;

std::string_view to_string(EnergyTrend trend);
EnergyTrend classify_energy(double ratio);

struct EnergyTrace {
  double H = 0.0;
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> ratio;
  EnergyTrend trend = EnergyTrend::Bounded;
  bool failed = false;
  std::string note;
};

EnergyTrace energy_trace(const TrajectoryRecord& rec, double macro_step);
std::vector<EnergyTrace> energy_drift_study(const StudySpec& spec, Execution exec = Execution::Serial);

// RMS of (v - v_ref) over the second half of the horizon [t_mid, t_end].
// Throws std::invalid_argument when the traces do not share the time grid.
double oscillation_metric(std::span<const double> t, std::span<const double> v, std::span<const double> v_ref);

// Metric on the dense velocity of the receiving mass.
double oscillation_metric(const TrajectoryRecord& cosim, const TrajectoryRecord& reference, std::size_t state_index);

struct OscillationRow {
  std::string label;
  CosimConfig config;
  double metric = 0.0;
  bool failed = false;
};

// Variants of the base configuration: raw, smoothed, and smoothed with each
// correction policy.
std::vector<OscillationRow> oscillation_study(const StudySpec& spec, Execution exec = Execution::Serial);

// `cosim run ...` / `cosim study {convergence|energy|oscillation} ...`.
// Exit codes: 0 success, 1 numeric failure, 2 usage error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cosim
