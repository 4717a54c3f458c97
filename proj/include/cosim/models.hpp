// Benchmark systems: a single spring-mass oscillator, two coupled
// oscillators, and an oscillator on prescribed moving ground. Each model has a
// monolithic vector field, a closed-form or matrix-exponential reference, an
// energy diagnostic and a split into co-simulation subsystems.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cosim {

struct SpringMassParams {
  double m = 1.0;
  double c = 1.0;
  double d = 0.0;
};

struct DoubleSpringMassParams {
  double m1 = 1.0;
  double m2 = 0.0005;
  double c1 = 4.0 * std::numbers::pi * std::numbers::pi;
  double c2 = 5.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double l01 = 0.0;
  double l02 = 0.0;
};

struct MovingGroundParams {
  double m = 0.0005;
  double c = 5.0;
  double d = 0.0;
  double x_t0 = 1.0;
  double omega1 = 2.0 * std::numbers::pi;
  double h0 = 0.0;
};

using DerivativeFn =
    std::function<void(double t, std::span<const double> x, std::span<const double> u, std::span<double> dx)>;
using OutputFn = std::function<void(double t, std::span<const double> x, std::span<double> y)>;

struct SubsystemSpec {
  std::string name;
  std::vector<double> initial_state;
  std::size_t n_inputs = 0;
  std::size_t n_outputs = 0;
  DerivativeFn derivative;
  OutputFn output;
};

// One exchanged signal: an output of one subsystem feeding an input of another.
struct Channel {
  std::size_t from_subsystem;
  std::size_t from_output;
  std::size_t to_subsystem;
  std::size_t to_input;
};

struct SplitSystemSpec {
  std::vector<SubsystemSpec> subsystems;
  std::vector<Channel> channels;

  // Throws unless every declared output feeds exactly one input and every
  // input is fed exactly once.
  void validate() const;
  std::size_t state_dim() const;
};

enum class ModelId { SpringMass, DoubleSpringMass, MovingGround };

class Model {
 public:
  static Model spring_mass(SpringMassParams p = {});
  static Model double_spring_mass(DoubleSpringMassParams p = {});
  static Model moving_ground(MovingGroundParams p = {});

  // Model by CLI name with "key=value" overrides. Parameter keys are the
  // struct field names; s0, s1, ... override the initial state.
  static Model from_name(std::string_view name, const std::map<std::string, double>& overrides = {});

  ModelId id() const;
  std::string_view name() const;
  std::size_t dim() const;

  const std::vector<double>& initial_state() const { return initial_; }
  Model with_initial_state(std::vector<double> x0) const;

  template <class P>
  const P& params() const {
    return std::get<P>(params_);
  }

  std::vector<double> rhs(double t, std::span<const double> x) const;
  double energy(double t, std::span<const double> x) const;
  std::vector<double> analytic_reference(double t, std::span<const double> initial) const;
  std::vector<double> analytic_reference(double t) const { return analytic_reference(t, initial_); }

  // Split form whose concatenated subsystem states equal the monolithic state.
  SplitSystemSpec split() const;

  // Velocity of the mass that receives exchanged data; used for oscillation
  // metrics.
  std::size_t receiver_velocity_index() const;

 private:
  using Params = std::variant<SpringMassParams, DoubleSpringMassParams, MovingGroundParams>;
  Model(Params p, std::vector<double> initial);

  Params params_;
  std::vector<double> initial_;
};

// Parses "k=v,k=v". Throws std::invalid_argument on malformed input.
std::map<std::string, double> parse_overrides(std::string_view text);

}  // namespace cosim
