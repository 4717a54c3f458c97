#include "cosim/models.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace cosim {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_dim(std::span<const double> x, std::size_t n, const char* where) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(where) + ": state dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
  }
}

void validate(const SpringMassParams& p) {
  if (!(p.m > 0.0) || p.c < 0.0 || p.d < 0.0) throw std::invalid_argument("spring-mass: need m > 0, c >= 0, d >= 0");
}

void validate(const DoubleSpringMassParams& p) {
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0)) throw std::invalid_argument("double-spring-mass: masses must be positive");
  if (p.c1 < 0.0 || p.c2 < 0.0 || p.d1 < 0.0 || p.d2 < 0.0) {
    throw std::invalid_argument("double-spring-mass: stiffness and damping must be nonnegative");
  }
}

void validate(const MovingGroundParams& p) {
  if (!(p.m > 0.0) || !(p.c > 0.0) || p.d < 0.0) throw std::invalid_argument("moving-ground: need m > 0, c > 0, d >= 0");
}

// Augmented homogeneous system z' = A z whose leading components are the
// model state. Constant forcing rides on a trailing unit component.
struct AugmentedSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd z0;
};

AugmentedSystem augment(const SpringMassParams& p, std::span<const double> x0) {
  AugmentedSystem s{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd(2)};
  s.a << 0.0, 1.0, -p.c / p.m, -p.d / p.m;
  s.z0 << x0[0], x0[1];
  return s;
}

AugmentedSystem augment(const DoubleSpringMassParams& p, std::span<const double> x0) {
  AugmentedSystem s{Eigen::MatrixXd::Zero(5, 5), Eigen::VectorXd(5)};
  s.a.row(0) << 0, 1, 0, 0, 0;
  s.a.row(1) << -(p.c1 + p.c2) / p.m1, -(p.d1 + p.d2) / p.m1, p.c2 / p.m1, p.d2 / p.m1,
      (p.c1 * p.l01 - p.c2 * p.l02) / p.m1;
  s.a.row(2) << 0, 0, 0, 1, 0;
  s.a.row(3) << p.c2 / p.m2, p.d2 / p.m2, -p.c2 / p.m2, -p.d2 / p.m2, p.c2 * p.l02 / p.m2;
  s.z0 << x0[0], x0[1], x0[2], x0[3], 1.0;
  return s;
}

// Ground displacement and velocity are carried as an undamped oscillator.
AugmentedSystem augment(const MovingGroundParams& p, std::span<const double> x0) {
  AugmentedSystem s{Eigen::MatrixXd::Zero(5, 5), Eigen::VectorXd(5)};
  const double k = p.c / p.m;
  s.a.row(0) << 0, 1, 0, 0, 0;
  s.a.row(1) << -k, -p.d / p.m, k, 0, k * p.h0;
  s.a.row(2) << 0, 0, 0, 1, 0;
  s.a.row(3) << 0, 0, -p.omega1 * p.omega1, 0, 0;
  s.z0 << x0[0], x0[1], p.x_t0, 0.0, 1.0;
  return s;
}

double ground(const MovingGroundParams& p, double t) { return p.x_t0 * std::cos(p.omega1 * t); }

}  // namespace

void SplitSystemSpec::validate() const {
  std::vector<std::vector<int>> out_used(subsystems.size()), in_used(subsystems.size());
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    out_used[i].assign(subsystems[i].n_outputs, 0);
    in_used[i].assign(subsystems[i].n_inputs, 0);
  }
  for (const auto& ch : channels) {
    if (ch.from_subsystem >= subsystems.size() || ch.to_subsystem >= subsystems.size() ||
        ch.from_output >= subsystems[ch.from_subsystem].n_outputs ||
        ch.to_input >= subsystems[ch.to_subsystem].n_inputs) {
      throw std::invalid_argument("split system: channel refers to a missing port");
    }
    ++out_used[ch.from_subsystem][ch.from_output];
    ++in_used[ch.to_subsystem][ch.to_input];
  }
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    for (int n : out_used[i]) {
      if (n != 1) throw std::invalid_argument("split system: wiring is not a bijection on outputs");
    }
    for (int n : in_used[i]) {
      if (n != 1) throw std::invalid_argument("split system: wiring is not a bijection on inputs");
    }
  }
}

std::size_t SplitSystemSpec::state_dim() const {
  std::size_t n = 0;
  for (const auto& s : subsystems) n += s.initial_state.size();
  return n;
}

Model::Model(Params p, std::vector<double> initial) : params_(std::move(p)), initial_(std::move(initial)) {
  std::visit([](const auto& q) { validate(q); }, params_);
  check_dim(initial_, dim(), "Model");
}

Model Model::spring_mass(SpringMassParams p) { return Model(p, {1.0, 0.0}); }

Model Model::double_spring_mass(DoubleSpringMassParams p) {
  return Model(p, {1.0 + p.l01, 0.0, 1.0 + p.l01 + p.l02, 0.0});
}

// Spring relaxed at t = 0 and the mass at rest, as the ground itself.
Model Model::moving_ground(MovingGroundParams p) { return Model(p, {p.x_t0 + p.h0, 0.0}); }

Model Model::with_initial_state(std::vector<double> x0) const { return Model(params_, std::move(x0)); }

Model Model::from_name(std::string_view name, const std::map<std::string, double>& overrides) {
  std::map<std::string, double*> keys;
  std::map<std::string, double> init;
  SpringMassParams sm;
  DoubleSpringMassParams ds;
  MovingGroundParams mg;
  if (name == "spring-mass") {
    keys = {{"m", &sm.m}, {"c", &sm.c}, {"d", &sm.d}};
  } else if (name == "double-spring-mass") {
    keys = {{"m1", &ds.m1}, {"m2", &ds.m2}, {"c1", &ds.c1},   {"c2", &ds.c2},
            {"d1", &ds.d1}, {"d2", &ds.d2}, {"l01", &ds.l01}, {"l02", &ds.l02}};
  } else if (name == "moving-ground") {
    keys = {{"m", &mg.m}, {"c", &mg.c}, {"d", &mg.d}, {"x_t0", &mg.x_t0}, {"omega1", &mg.omega1}, {"h0", &mg.h0}};
  } else {
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
  }
  for (const auto& [k, v] : overrides) {
    if (auto it = keys.find(k); it != keys.end()) {
      *it->second = v;
    } else if (k.size() > 1 && k[0] == 's' && k.find_first_not_of("0123456789", 1) == std::string::npos) {
      init[k] = v;
    } else {
      throw std::invalid_argument("unknown parameter '" + k + "' for model " + std::string(name));
    }
  }
  Model model = name == "spring-mass" ? spring_mass(sm) : name == "double-spring-mass" ? double_spring_mass(ds)
                                                                                         : moving_ground(mg);
  if (!init.empty()) {
    std::vector<double> x0 = model.initial_state();
    for (const auto& [k, v] : init) {
      const std::size_t i = std::stoul(k.substr(1));
      if (i >= x0.size()) throw std::invalid_argument("initial-state override '" + k + "' out of range");
      x0[i] = v;
    }
    model = model.with_initial_state(std::move(x0));
  }
  return model;
}

ModelId Model::id() const {
  return std::visit(Overloaded{[](const SpringMassParams&) { return ModelId::SpringMass; },
                               [](const DoubleSpringMassParams&) { return ModelId::DoubleSpringMass; },
                               [](const MovingGroundParams&) { return ModelId::MovingGround; }},
                    params_);
}

std::string_view Model::name() const {
  switch (id()) {
    case ModelId::SpringMass: return "spring-mass";
    case ModelId::DoubleSpringMass: return "double-spring-mass";
    case ModelId::MovingGround: return "moving-ground";
  }
  return "unknown";
}

std::size_t Model::dim() const { return id() == ModelId::DoubleSpringMass ? 4 : 2; }

std::size_t Model::receiver_velocity_index() const { return id() == ModelId::DoubleSpringMass ? 3 : 1; }

std::vector<double> Model::rhs(double t, std::span<const double> x) const {
  check_dim(x, dim(), "Model::rhs");
  return std::visit(
      Overloaded{
          [&](const SpringMassParams& p) -> std::vector<double> {
            return {x[1], (-p.c * x[0] - p.d * x[1]) / p.m};
          },
          [&](const DoubleSpringMassParams& p) -> std::vector<double> {
            const double coupling = p.c2 * (x[2] - x[0] - p.l02) + p.d2 * (x[3] - x[1]);
            return {x[1], (-p.c1 * (x[0] - p.l01) - p.d1 * x[1] + coupling) / p.m1, x[3], -coupling / p.m2};
          },
          [&](const MovingGroundParams& p) -> std::vector<double> {
            return {x[1], (-p.c * (x[0] - ground(p, t) - p.h0) - p.d * x[1]) / p.m};
          }},
      params_);
}

double Model::energy(double t, std::span<const double> x) const {
  check_dim(x, dim(), "Model::energy");
  return std::visit(Overloaded{[&](const SpringMassParams& p) {
                                 return 0.5 * p.m * x[1] * x[1] + 0.5 * p.c * x[0] * x[0];
                               },
                               [&](const DoubleSpringMassParams& p) {
                                 const double s1 = x[0] - p.l01;
                                 const double s2 = x[2] - x[0] - p.l02;
                                 return 0.5 * p.m1 * x[1] * x[1] + 0.5 * p.c1 * s1 * s1 + 0.5 * p.m2 * x[3] * x[3] +
                                        0.5 * p.c2 * s2 * s2;
                               },
                               [&](const MovingGroundParams& p) {
                                 const double s = x[0] - ground(p, t) - p.h0;
                                 return 0.5 * p.m * x[1] * x[1] + 0.5 * p.c * s * s;
                               }},
                    params_);
}

std::vector<double> Model::analytic_reference(double t, std::span<const double> initial) const {
  check_dim(initial, dim(), "Model::analytic_reference");
  if (const auto* p = std::get_if<SpringMassParams>(&params_); p && p->d == 0.0) {
    const double x0 = initial[0];
    const double v0 = initial[1];
    if (p->c == 0.0) return {x0 + v0 * t, v0};
    const double w = std::sqrt(p->c / p->m);
    const double cs = std::cos(w * t);
    const double sn = std::sin(w * t);
    return {x0 * cs + v0 / w * sn, -x0 * w * sn + v0 * cs};
  }
  const AugmentedSystem sys = std::visit([&](const auto& q) { return augment(q, initial); }, params_);
  const Eigen::MatrixXd propagator = (sys.a * t).exp();
  const Eigen::VectorXd z = propagator * sys.z0;
  return std::vector<double>(z.data(), z.data() + dim());
}

SplitSystemSpec Model::split() const {
  SplitSystemSpec spec = std::visit(
      Overloaded{
          [&](const SpringMassParams& p) {
            SubsystemSpec spring{"spring", {initial_[0]}, 1, 1,
                                 [](double, std::span<const double>, std::span<const double> u,
                                    std::span<double> dx) { dx[0] = u[0]; },
                                 [c = p.c](double, std::span<const double> x, std::span<double> y) {
                                   y[0] = -c * x[0];
                                 }};
            // v' = F / m keeps the split field identical to the monolithic one.
            SubsystemSpec mass{"mass", {initial_[1]}, 1, 1,
                               [p](double, std::span<const double> x, std::span<const double> u,
                                   std::span<double> dx) { dx[0] = (u[0] - p.d * x[0]) / p.m; },
                               [](double, std::span<const double> x, std::span<double> y) { y[0] = x[0]; }};
            return SplitSystemSpec{{spring, mass}, {{0, 0, 1, 0}, {1, 0, 0, 0}}};
          },
          [&](const DoubleSpringMassParams& p) {
            SubsystemSpec heavy{"mass1", {initial_[0], initial_[1]}, 2, 2,
                                [p](double, std::span<const double> x, std::span<const double> u,
                                    std::span<double> dx) {
                                  const double coupling = p.c2 * (u[0] - x[0] - p.l02) + p.d2 * (u[1] - x[1]);
                                  dx[0] = x[1];
                                  dx[1] = (-p.c1 * (x[0] - p.l01) - p.d1 * x[1] + coupling) / p.m1;
                                },
                                [](double, std::span<const double> x, std::span<double> y) {
                                  y[0] = x[0];
                                  y[1] = x[1];
                                }};
            SubsystemSpec light{"mass2", {initial_[2], initial_[3]}, 2, 2,
                                [p](double, std::span<const double> x, std::span<const double> u,
                                    std::span<double> dx) {
                                  const double coupling = p.c2 * (x[0] - u[0] - p.l02) + p.d2 * (x[1] - u[1]);
                                  dx[0] = x[1];
                                  dx[1] = -coupling / p.m2;
                                },
                                [](double, std::span<const double> x, std::span<double> y) {
                                  y[0] = x[0];
                                  y[1] = x[1];
                                }};
            return SplitSystemSpec{{heavy, light}, {{0, 0, 1, 0}, {0, 1, 1, 1}, {1, 0, 0, 0}, {1, 1, 0, 1}}};
          },
          [&](const MovingGroundParams& p) {
            // The ground is stateless: its displacement is a prescribed output.
            SubsystemSpec ground_sys{"ground", {}, 0, 1,
                                     [](double, std::span<const double>, std::span<const double>, std::span<double>) {},
                                     [p](double t, std::span<const double>, std::span<double> y) {
                                       y[0] = ground(p, t);
                                     }};
            SubsystemSpec mass{"mass", {initial_[0], initial_[1]}, 1, 0,
                               [p](double, std::span<const double> x, std::span<const double> u,
                                   std::span<double> dx) {
                                 dx[0] = x[1];
                                 dx[1] = (-p.c * (x[0] - u[0] - p.h0) - p.d * x[1]) / p.m;
                               },
                               [](double, std::span<const double>, std::span<double>) {}};
            return SplitSystemSpec{{ground_sys, mass}, {{0, 0, 1, 0}}};
          }},
      params_);
  spec.validate();
  return spec;
}

std::map<std::string, double> parse_overrides(std::string_view text) {
  std::map<std::string, double> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("malformed parameter '" + item + "'");
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw std::invalid_argument("malformed value in '" + item + "'");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

}  // namespace cosim
