#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "cosim/balance.hpp"

using namespace cosim;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("step and split errors") {
  CHECK(step_error(1.0, 0.9) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(step_error(0.5, 0.0) == 0.5);
  CHECK(step_error(0.7, 0.7) == 0.0);

  const auto e = split_error(1.0, 0.9, 0.85);
  CHECK(e.total == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(e.bc_part == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(e.switch_part == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(e.total == e.bc_part + e.switch_part);

  CHECK(split_error(1.0, 0.9, 0.9).switch_part == 0.0);
  CHECK(split_error(1.0, 1.0, 0.5).switch_part == 0.5);
}

TEST_CASE("policy names round-trip") {
  for (auto p : {CorrectionPolicy::None, CorrectionPolicy::Classic1, CorrectionPolicy::Smooth1,
                 CorrectionPolicy::Smooth2, CorrectionPolicy::Smooth4, CorrectionPolicy::SplitEarly}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_policy("smooth3"), std::invalid_argument);
}

TEST_CASE("schedule shapes per policy") {
  SUBCASE("smooth1") {
    BalanceLedger l;
    l.schedule(split_error(0.1, 0.0, 0.0), 0.0, 0.2, CorrectionPolicy::Smooth1);
    CHECK(l.correction_at(0.1) == doctest::Approx(1.09375).epsilon(1e-14));
    CHECK(l.correction_at(0.2) == 0.0);
  }
  SUBCASE("classic1") {
    BalanceLedger l;
    l.schedule(split_error(0.3, 0.0, 0.0), 1.0, 0.2, CorrectionPolicy::Classic1);
    CHECK(l.correction_at(1.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(l.correction_at(1.19) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(l.correction_at(0.99) == 0.0);
    CHECK(l.correction_at(1.2) == 0.0);
    CHECK(l.entries().front().kind == CorrectionKind::Classic);
  }
  SUBCASE("smooth4 support") {
    BalanceLedger l;
    l.schedule(split_error(1.0, 0.0, 0.0), 0.5, 0.1, CorrectionPolicy::Smooth4);
    CHECK(l.entries().front().shape.t_start() == 0.5);
    CHECK(l.entries().front().shape.t_end() == doctest::Approx(0.9).epsilon(1e-15));
  }
  SUBCASE("none schedules nothing") {
    BalanceLedger l;
    l.schedule(split_error(1.0, 0.0, 0.0), 0.5, 0.1, CorrectionPolicy::None);
    CHECK(l.entries().empty());
    CHECK(l.correction_at(0.55) == 0.0);
  }
}

TEST_CASE("smooth2 refeeds of equal amounts form a partition of unity") {
  const double a = 0.7;
  BalanceLedger l;
  for (int j = 0; j < 6; ++j) l.schedule(split_error(a, 0.0, 0.0, j), j * 1.0, 1.0, CorrectionPolicy::Smooth2);
  for (double t = 1.0; t <= 6.0; t += 0.0625) CHECK(l.correction_at(t) == doctest::Approx(a).epsilon(1e-12));
  CHECK(l.correction_at(1.5) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("split-early timing") {
  BalanceLedger l;
  const double h = 0.1;
  l.schedule_switch_part(0.2, 0.4, h, 5);
  l.schedule(split_error(1.0, 0.8, 0.6, 5), 0.5, h, CorrectionPolicy::SplitEarly);
  REQUIRE(l.entries().size() == 2);
  const auto& sw = l.entries()[0];
  const auto& bc = l.entries()[1];
  CHECK(sw.kind == CorrectionKind::SwitchPart);
  CHECK(sw.shape.t_start() == 0.4);
  CHECK(sw.shape.t_end() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(bc.kind == CorrectionKind::BcPart);
  CHECK(bc.shape.t_start() == 0.5);
  CHECK(bc.amount == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(l.scheduled() == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("correction_at and active_on") {
  BalanceLedger empty;
  CHECK(empty.correction_at(3.0) == 0.0);
  const auto r = empty.closure_report(1.0);
  CHECK(r.scheduled == 0.0);
  CHECK(r.delivered == 0.0);
  CHECK(r.residual == 0.0);

  BalanceLedger l;
  l.schedule(split_error(0.5, 0.0, 0.0), 0.0, 0.2, CorrectionPolicy::Smooth1);
  CHECK(l.correction_at(0.2) == 0.0);
  CHECK(l.active_on(0.0, 0.2).size() == 1);
  CHECK(l.active_on(0.2, 0.4).empty());
}

TEST_CASE("closure report") {
  BalanceLedger l;
  l.schedule(split_error(0.3, 0.1, 0.1), 0.0, 0.1, CorrectionPolicy::Smooth2);
  l.schedule(split_error(-0.2, 0.0, 0.0), 0.1, 0.1, CorrectionPolicy::Classic1);
  const auto done = l.closure_report(1.0);
  CHECK(std::abs(done.residual) <= 1e-10);
  CHECK(std::abs(done.delivered) <= 1e-13);
  CHECK(done.scheduled == doctest::Approx(0.0).scale(1.0));

  BalanceLedger crossing;
  crossing.schedule(split_error(1.0, 0.0, 0.0), 0.9, 0.1, CorrectionPolicy::Smooth2);
  const auto half = crossing.closure_report(1.0);
  CHECK(half.delivered == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.residual == doctest::Approx(0.5).epsilon(1e-14));
  const auto shape = crossing.entries().front().shape;
  CHECK(simpson([&](double t) { return shape(t); }, 0.9, 1.0, 2000) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("refeed exactness") {
  for (auto p : {CorrectionPolicy::Classic1, CorrectionPolicy::Smooth1, CorrectionPolicy::Smooth2,
                 CorrectionPolicy::Smooth4}) {
    BalanceLedger l;
    l.schedule(split_error(0.37, 0.0, 0.0), 0.2, 0.05, p);
    const auto r = l.closure_report(10.0);
    CHECK(std::abs(r.delivered - 0.37) <= 1e-10);
    const auto& s = l.entries().front().shape;
    CHECK(std::abs(0.37 * quadrature([&](double t) { return s(t); }, s.t_start(), s.t_end()) - 0.37) <= 1e-10);
  }
}

TEST_CASE("correction smoothness at exchange times") {
  const double h = 0.1, d = 1e-5;
  // One-sided value, slope and curvature estimates, second order accurate.
  auto side = [&](const BalanceLedger& l, double t, double dir) {
    double f[4];
    for (int i = 0; i < 4; ++i) f[i] = l.correction_at(t + dir * (i == 0 ? 1e-12 : i * d));
    return std::array<double, 3>{f[0], dir * (-3 * f[0] + 4 * f[1] - f[2]) / (2 * d),
                                 (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (d * d)};
  };
  BalanceLedger smooth, classic;
  for (int j = 1; j <= 5; ++j) {
    const auto e = split_error(0.01 * j, 0.0, 0.0, j);
    smooth.schedule(e, j * h, h, CorrectionPolicy::Smooth2);
    classic.schedule(e, j * h, h, CorrectionPolicy::Classic1);
  }
  std::array<double, 3> scale{};
  for (double t = 0.1; t < 0.7; t += 0.01) {
    const auto v = side(smooth, t + 0.005, 1.0);
    for (int r = 0; r < 3; ++r) scale[r] = std::max(scale[r], std::abs(v[r]));
  }
  for (int j = 2; j <= 5; ++j) {
    const auto l = side(smooth, j * h, -1.0), r = side(smooth, j * h, 1.0);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(l[k] - r[k]) <= 1e-6 * scale[k]);
  }
  const auto l = side(classic, 3 * h, -1.0), r = side(classic, 3 * h, 1.0);
  CHECK(std::abs(l[0] - r[0]) > 1e-3);
}

TEST_CASE("ledger rejects bad input") {
  BalanceLedger l;
  CHECK_THROWS_AS(l.schedule(split_error(1.0, 0.0, 0.0), 0.0, 0.0, CorrectionPolicy::Smooth1), std::invalid_argument);
  CHECK_THROWS_AS(l.schedule(split_error(std::nan(""), 0.0, 0.0), 0.0, 0.1, CorrectionPolicy::Smooth1),
                  std::invalid_argument);
}
