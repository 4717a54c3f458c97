#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "cosim/signals.hpp"

using namespace cosim;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

ExtrapolantSegment constant(double v, Interval w) { return ExtrapolantSegment(w.start, v, 0.0, w); }

}  // namespace

TEST_CASE("extrapolate") {
  const std::vector<SamplePoint> one{{0.0, 2.0}};
  const auto c = extrapolate(one, 0, {0.0, 0.2});
  CHECK(c(0.1) == 2.0);
  CHECK(c.degree() == 0);

  const std::vector<SamplePoint> two{{0.0, 0.0}, {0.1, 1.0}};
  CHECK(extrapolate(two, 1, {0.1, 0.2})(0.2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(extrapolate(two, 0, {0.1, 0.2})(0.2) == 1.0);

  const std::vector<SamplePoint> single{{0.0, 1.0}};
  const auto fallback = extrapolate(single, 1, {0.0, 0.05});
  CHECK(fallback(0.04) == 1.0);
  CHECK(fallback.degree() == 0);
}

TEST_CASE("extrapolate rejects bad input") {
  const std::vector<SamplePoint> none;
  CHECK_THROWS_AS(extrapolate(none, 0, {0.0, 0.1}), std::invalid_argument);
  const std::vector<SamplePoint> dup{{0.1, 1.0}, {0.1, 2.0}};
  CHECK_THROWS_AS(extrapolate(dup, 1, {0.1, 0.2}), std::invalid_argument);
  const std::vector<SamplePoint> ok{{0.0, 1.0}};
  CHECK_THROWS_AS(extrapolate(ok, 0, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(extrapolate(ok, 2, {0.0, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(extrapolate(ok, 0, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("prolong keeps the polynomial") {
  const auto c = constant(2.0, {0.0, 0.2});
  CHECK(prolong(c, {0.2, 0.4})(0.3) == 2.0);
  const ExtrapolantSegment line(0.0, 0.0, 1.0, {0.0, 0.1});
  const auto p = prolong(line, {0.1, 0.2});
  CHECK(p(0.15) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(p.anchor() == 0.0);
  CHECK_THROWS_AS(prolong(line, {0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("realize") {
  const Interval w{0.0, 1.0};
  const auto zero = constant(0.0, w), one = constant(1.0, w);
  const auto r = realize(&zero, one, true, {}, w);
  CHECK(r(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r(0.0) == 0.0);
  CHECK(r(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.integrate(false) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(simpson([&](double t) { return r(t); }, 0.0, 1.0, 1000) == doctest::Approx(0.5).epsilon(1e-12));

  const auto same = realize(&one, one, true, {}, w);
  for (double t = 0.0; t <= 1.0; t += 0.05) CHECK(same(t) == doctest::Approx(1.0).epsilon(1e-15));

  const Interval h{0.0, 0.2};
  const auto z = constant(0.0, h);
  const auto corrected =
      realize(&z, z, true, {Correction{0.1, IntervalShape(ShapeKind::Poly6Hat, 0.0, 0.2)}}, h);
  CHECK(corrected(0.1) == doctest::Approx(1.09375).epsilon(1e-14));
  CHECK(corrected.integrate(false) == 0.0);
  CHECK(corrected.integrate(true) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(corrected.correction_integral() == doctest::Approx(0.1).epsilon(1e-14));

  const auto plain = realize(nullptr, constant(2.0, h), false, {}, h);
  CHECK(plain.integrate(false) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(realize(nullptr, one, true, {}, w), std::invalid_argument);
}

TEST_CASE("smoothed realization interpolates the extrapolants at the ends") {
  const Interval prev_w{0.0, 0.3}, w{0.3, 0.6};
  const ExtrapolantSegment prev(0.0, 1.0, -2.0, prev_w);
  const ExtrapolantSegment base(0.3, 0.5, 3.0, w);
  const auto r = realize(&prev, base, true, {}, w);
  CHECK(r(0.3) == prev(0.3));
  CHECK(r(0.6) == base(0.6));
}

TEST_CASE("closed-form integral agrees with quadrature on random realizations") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.01, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), h = width(rng);
    const Interval prev_w{a - h, a}, w{a, a + h};
    const ExtrapolantSegment prev(a - h, u(rng), u(rng), prev_w);
    const ExtrapolantSegment base(a, u(rng), u(rng), w);
    std::vector<Correction> corr{{u(rng), IntervalShape(ShapeKind::TwoIntervalHat, a - h, a + h)},
                                 {u(rng), IntervalShape(ShapeKind::Poly6Hat, a, a + h)}};
    const bool smoothing = i % 2 == 0;
    const auto r = realize(&prev, base, smoothing, corr, w);
    const double q_used = simpson([&](double t) { return r.signal(t); }, a, a + h, 2000);
    const double q_all = simpson([&](double t) { return r(t); }, a, a + h, 2000);
    CHECK(std::abs(r.integrate(false) - q_used) <= 1e-10);
    CHECK(std::abs(r.integrate(true) - q_all) <= 1e-10);
  }
}

TEST_CASE("constant and affine signals are reproduced exactly") {
  const double h = 0.1;
  std::vector<SamplePoint> hist{{0.0, 3.0}};
  for (int j = 1; j < 5; ++j) {
    const Interval w{(j - 1) * h, j * h};
    const auto seg = extrapolate(hist, 0, w);
    CHECK(seg.integral() == doctest::Approx(3.0 * h).epsilon(1e-15));
    hist.push_back({j * h, 3.0});
  }
  auto affine = [](double t) { return 1.0 - 2.0 * t; };
  std::vector<SamplePoint> lin{{0.0, affine(0.0)}, {h, affine(h)}};
  for (int j = 2; j < 6; ++j) {
    const Interval w{(j - 1) * h, j * h};
    const auto seg = extrapolate(lin, 1, w);
    const double exact = h * affine((j - 0.5) * h);
    CHECK(seg.integral() == doctest::Approx(exact).epsilon(1e-13));
    CHECK(seg(w.end) == doctest::Approx(affine(w.end)).epsilon(1e-13));
    lin.push_back({j * h, affine(j * h)});
  }
}
