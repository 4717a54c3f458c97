#include "cosim/sweep.hpp"

#include <exception>

#include "cosim/errors.hpp"

namespace cosim {

namespace {

// Numeric breakdown is data for a sweep (an unstable step size), so it is
// captured per point. Configuration errors still propagate.
SweepResult run_point(const CosimConfig& config) {
  SweepResult r;
  try {
    r.record = run_cosimulation(config);
  } catch (const NumericError& e) {
    r.numeric_failure = true;
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<SweepResult> run_sweep_serial(std::span<const CosimConfig> configs) {
  std::vector<SweepResult> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_point(c));
  return out;
}

std::vector<SweepResult> run_sweep_parallel(std::span<const CosimConfig> configs) {
  for (const auto& c : configs) c.validate();
  std::vector<SweepResult> out(configs.size());
  std::vector<std::exception_ptr> failures(configs.size());
  const long n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_point(configs[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace cosim
