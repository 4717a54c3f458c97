// Batch execution of independent co-simulation runs.
//
// Each sweep point is an isolated run, so the parallel kernel distributes
// points over OpenMP threads. The serial path is kept as the reference the
// parallel one is tested against; both return results in input order.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosim/master.hpp"

namespace cosim {

enum class Execution { Serial, Parallel };

struct SweepResult {
  std::optional<TrajectoryRecord> record;
  bool numeric_failure = false;
  std::string error;
};

std::vector<SweepResult> run_sweep_serial(std::span<const CosimConfig> configs);
std::vector<SweepResult> run_sweep_parallel(std::span<const CosimConfig> configs);

inline std::vector<SweepResult> run_sweep(std::span<const CosimConfig> configs, Execution exec) {
  return exec == Execution::Parallel ? run_sweep_parallel(configs) : run_sweep_serial(configs);
}

}  // namespace cosim
