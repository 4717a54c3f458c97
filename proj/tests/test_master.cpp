#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cosim/master.hpp"

using namespace cosim;

namespace {

CosimConfig spring(double h, double t_end) {
  CosimConfig c;
  c.model = Model::spring_mass();
  c.macro_step = h;
  c.t_end = t_end;
  return c;
}

double max_error(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  double e = 0.0;
  for (std::size_t j = 0; j < a.exchange.size(); ++j)
    for (std::size_t i = 0; i < a.exchange[j].x.size(); ++i)
      e = std::max(e, std::abs(a.exchange[j].x[i] - b.exchange[j].x[i]));
  return e;
}

}  // namespace

TEST_CASE("mass subsystem under constant force") {
  const auto split = Model::spring_mass().split();
  Subsystem mass(split.subsystems[1]);
  mass.state()[0] = 0.3;
  const double h = 0.2, force = -1.5;
  const Interval w{0.0, h};
  const ExtrapolantSegment seg(0.0, force, 0.0, w);
  const std::vector<InputRealization> in{realize(nullptr, seg, false, {}, w)};
  micro_advance(mass, in, 0.0, h, MicroIntegrator());
  CHECK(std::abs(mass.state()[0] - (0.3 + force * h)) <= 1e-10);
  CHECK(std::abs(mass.accumulators()[0] - (0.3 * h + force * h * h / 2)) <= 1e-10);

  // Accumulators restart on the next interval.
  const Interval w2{h, 2 * h};
  const ExtrapolantSegment zero(h, 0.0, 0.0, w2);
  const std::vector<InputRealization> in2{realize(nullptr, zero, false, {}, w2)};
  const auto samples = micro_advance(mass, in2, h, 2 * h, MicroIntegrator(), std::vector<double>{0.25, 0.3});
  CHECK(samples.size() == 2);
  CHECK(std::abs(mass.accumulators()[0] - mass.state()[0] * h) <= 1e-10);
  CHECK_THROWS_AS(micro_advance(mass, in2, h, 2 * h, MicroIntegrator(), std::vector<double>{0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(micro_advance(mass, {}, h, 2 * h, MicroIntegrator()), std::invalid_argument);
}

TEST_CASE("decoupled double system matches the reference") {
  DoubleSpringMassParams p;
  p.c2 = 0.0;
  auto c = spring(0.1, 2.0);
  c.model = Model::double_spring_mass(p).with_initial_state({1.0, 0.0, 0.5, 0.2});
  const auto rec = run_cosimulation(c);
  CHECK(max_error(rec, reference_run(c)) <= 10 * c.micro.abs_tol * 10);
}

TEST_CASE("unstabilized exchange gains energy; classic correction holds it") {
  const auto raw = run_cosimulation(spring(0.2, 10.0));
  const double e0 = raw.exchange.front().E;
  CHECK(raw.exchange.back().E > e0);
  // Energy read at exchange times rises over every period window.
  for (std::size_t j = 32; j < raw.exchange.size(); j += 32) CHECK(raw.exchange[j].E > raw.exchange[j - 32].E);

  auto bc = spring(0.1, 10.0);
  bc.policy = CorrectionPolicy::Classic1;
  const auto rec = run_cosimulation(bc);
  // Position error stays small; the amplitude part of it does not grow (what
  // remains grows only through phase).
  double first = 0.0, second = 0.0, err = 0.0;
  for (const auto& row : rec.exchange) {
    err = std::max(err, std::abs(row.x[0] - std::cos(row.t)));
    const double amp = std::abs(std::hypot(row.x[0], row.x[1]) - 1.0);
    (row.t <= 5.0 ? first : second) = std::max(row.t <= 5.0 ? first : second, amp);
  }
  CHECK(err < 0.1);
  CHECK(second <= 1.5 * first);
}

TEST_CASE("reference run") {
  const auto c = spring(0.2, 10.0);
  const auto ref = reference_run(c);
  CHECK(max_error(ref, ref) == 0.0);
  for (const auto& row : ref.exchange) {
    CHECK(std::abs(row.E - 0.5) <= 1e-8);
    CHECK(row.dE == std::vector<double>{0.0, 0.0});
  }
  CHECK(ref.exchange.size() == 51);
  CHECK(ref.dense.size() == 50 * 20 + 1);

  CosimConfig mg = c;
  mg.model = Model::moving_ground();
  mg.t_end = 2.0;
  mg.macro_step = 0.01;
  const auto& p = mg.model.params<MovingGroundParams>();
  for (const auto& row : reference_run(mg).dense) {
    const double ground = p.x_t0 * std::cos(p.omega1 * row.t) + p.h0;
    CHECK(std::abs(row.x[0] - ground) < 1e-2 * p.x_t0);
  }
}

TEST_CASE("step integrals agree with quadrature of the dense trace") {
  auto c = spring(0.2, 4.0);
  c.ext_order = 1;
  c.smoothing = true;
  const auto rec = run_cosimulation(c);
  const int n = c.dense_per_step;
  for (std::size_t j = 0; j + 1 < rec.exchange.size(); ++j) {
    // channel 0 is the spring force -c x, channel 1 the velocity
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i <= n; ++i) {
      const auto& row = rec.dense[j * n + i];
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s0 += w * -row.x[0];
      s1 += w * row.x[1];
    }
    const double dt = c.macro_step / n;
    CHECK(std::abs(s0 * dt / 3 - rec.balance[0].true_integral[j]) <= 1e-8);
    CHECK(std::abs(s1 * dt / 3 - rec.balance[1].true_integral[j]) <= 1e-8);
  }
}

TEST_CASE("grid and record layout") {
  auto c = spring(0.1, 1.0);
  c.dense_per_step = 4;
  c.keep_realizations = true;
  const auto rec = run_cosimulation(c);
  REQUIRE(rec.exchange.size() == 11);
  for (std::size_t j = 0; j < rec.exchange.size(); ++j) CHECK(rec.exchange[j].t == j * 0.1);
  CHECK(rec.dense.size() == 41);
  CHECK(rec.realized.size() == 10);
  // Order 0 without smoothing: the input on [t_{j-1}, t_j] is the sample at t_{j-1}.
  for (std::size_t j = 1; j < rec.exchange.size(); ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(rec.realized[j - 1][k](rec.exchange[j].t) == rec.exchange[j - 1].y[k]);
      CHECK(rec.exchange[j].u_used[k] == rec.exchange[j - 1].y[k]);
    }
  }
  CHECK(rec.exchange.front().u_used.size() == 2);
}

TEST_CASE("parallel subsystems give identical results") {
  for (auto policy : {CorrectionPolicy::None, CorrectionPolicy::Smooth2, CorrectionPolicy::SplitEarly}) {
    auto c = spring(0.1, 3.0);
    c.smoothing = true;
    c.policy = policy;
    c.model = Model::double_spring_mass();
    const auto serial = run_cosimulation(c);
    c.parallel_subsystems = true;
    const auto par = run_cosimulation(c);
    REQUIRE(serial.dense.size() == par.dense.size());
    for (std::size_t i = 0; i < serial.dense.size(); ++i) {
      CHECK(serial.dense[i].x == par.dense[i].x);
      CHECK(serial.dense[i].u_real == par.dense[i].u_real);
    }
  }
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run_cosimulation(spring(0.3, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(run_cosimulation(spring(0.0, 1.0)), std::invalid_argument);
  auto c = spring(0.1, 1.0);
  c.ext_order = 2;
  CHECK_THROWS_AS(run_cosimulation(c), std::invalid_argument);
  CHECK(spring(0.1, 1.0).steps() == 10);
  CHECK(spring(0.025, 10.0).steps() == 400);
}

TEST_CASE("corrections crossing the horizon are reported") {
  auto c = spring(0.1, 1.0);
  c.policy = CorrectionPolicy::Smooth4;
  const auto rec = run_cosimulation(c);
  CHECK_FALSE(rec.warnings.empty());
  double delivered = 0.0;
  for (double d : rec.balance[0].delivered) delivered += d;
  CHECK(std::abs(delivered + rec.balance[0].closure.residual - rec.balance[0].scheduled) <= 1e-8);
}
