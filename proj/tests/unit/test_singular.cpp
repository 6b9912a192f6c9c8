#include "doctest.h"
#include "korenblum/singular.hpp"

#include <cmath>
#include <numbers>

using namespace korenblum;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Premeasure atom_balanced() {
  return Premeasure::make({component::Lebesgue{1.0}, component::Atom{Turn(0, 1), 0.0, -1.0}});
}

Premeasure cantor_balanced(const CantorSpec& s) {
  return Premeasure::make({component::Lebesgue{1.0}, component::Cantor{s, -1.0}});
}

std::vector<double> radian_schedule(int from, int to) {
  std::vector<double> d;
  for (int j = from; j <= to; ++j) d.push_back(std::ldexp(1.0, -j));
  return d;
}

}  // namespace

TEST_CASE("series golden values") {
  const auto F = CarlesonSet::points({Turn(0, 1)});
  CHECK(singular_part_series(atom_balanced(), F, 10).value == doctest::Approx(-1.0));
  CHECK(singular_part_series(Premeasure::zero(), F, 10).value == 0.0);
  for (int n = 1; n <= 5; ++n) {
    const auto Fn = CarlesonSet::cantor_stage(CantorSpec::linear(), n);
    const auto r = singular_part_series(cantor_balanced(CantorSpec::linear()), Fn, 1 << 20);
    CHECK(r.value == doctest::Approx(-(1 - std::ldexp(1.0, -n))).epsilon(1e-13));
  }
}

TEST_CASE("delta trace") {
  const auto F = CarlesonSet::points({Turn(0, 1)});
  std::vector<double> sched;
  for (int j = 2; j <= 12; ++j) sched.push_back(kTwoPi * std::ldexp(1.0, -j));
  const auto r = singular_part_delta(atom_balanced(), F, sched);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const int j = static_cast<int>(i) + 2;
    CHECK(r.delta_trace[i].second == doctest::Approx(std::ldexp(1.0, -j + 1) - 1).epsilon(1e-13));
  }
  CHECK(r.trace_monotone);

  const auto z = singular_part_delta(Premeasure::zero(), F, sched);
  for (const auto& [d, v] : z.delta_trace) CHECK(v == 0.0);
  CHECK_THROWS_AS(singular_part_delta(atom_balanced(), F, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("series and delta limit agree") {
  const auto mu = cantor_balanced(CantorSpec::linear());
  const auto sched = radian_schedule(10, 20);
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const auto F = CarlesonSet::cantor_stage(CantorSpec::linear(), n);
    const double s = singular_part_series(mu, F, 1 << 20).value;
    const auto d = singular_part_delta(mu, F, sched);
    // Excess of F^delta over F: two delta-collars (in turns) per kept arc.
    const double kept = std::ldexp(1.0, static_cast<int>(CantorSpec::linear().M_double(n)));
    const double excess = 2 * kept * sched.back() / kTwoPi;
    CHECK(std::abs(d.value - s) <= excess + 1e-12);
    CHECK(d.trace_monotone);
  }
  const auto Fa = CarlesonSet::points({Turn(0, 1)});
  CHECK(std::abs(singular_part_delta(atom_balanced(), Fa, sched).value -
                 singular_part_series(atom_balanced(), Fa, 4).value) <= 1e-6);
}

TEST_CASE("lazy Cantor sets") {
  const CantorSpec s = CantorSpec::example1(0.5);
  const auto mu = cantor_balanced(s);
  const auto F = CarlesonSet::cantor_limit(s);
  const auto r = singular_part_series(mu, F, 60, nullptr);
  // Lebesgue sees every gap, the Cantor measure none: -sum_k 2^-k.
  CHECK(r.value == doctest::Approx(-(1 - std::ldexp(1.0, -60))));
  CHECK(F.complementary_length() == doctest::Approx(1.0));
}

TEST_CASE("non-positivity report") {
  const Majorant l = Majorant::log_power(1, 2);
  const auto a = nonpositivity_check(atom_balanced(), CarlesonSet::points({Turn(0, 1)}), l);
  CHECK(a.sign_ok);
  CHECK(a.norm_certified);
  CHECK(a.norm == doctest::Approx(0.5));
  CHECK(a.entropy == doctest::Approx(2.0));
  CHECK(a.entropy_bound_ok);

  const auto z = nonpositivity_check(Premeasure::zero(), CarlesonSet::points({Turn(1, 3)}), l);
  CHECK(z.sign_ok);
  CHECK(z.series.value == 0.0);

  const auto c = nonpositivity_check(cantor_balanced(CantorSpec::linear()),
                                     CarlesonSet::cantor_stage(CantorSpec::linear(), 5),
                                     Majorant::log_power(0.5));
  CHECK(c.sign_ok);
  CHECK(c.series.value <= 1e-9);
  CHECK(c.entropy_bound_ok);
}

TEST_CASE("tail bound from a norm") {
  const Majorant l = Majorant::log_power(0.5);
  const auto F = CarlesonSet::cantor_stage(CantorSpec::linear(), 4);
  const auto mu = cantor_balanced(CantorSpec::linear());
  const auto r = singular_part_series(mu, F, 3, &l, 1.0);
  REQUIRE(r.tail_bound.has_value());
  const auto full = singular_part_series(mu, F, 1 << 20);
  CHECK(std::abs(full.value - r.value) <= *r.tail_bound + 1e-12);
}
