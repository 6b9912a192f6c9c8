#include "doctest.h"
#include "korenblum/errors.hpp"
#include "korenblum/majorant.hpp"

#include <cmath>

using namespace korenblum;

namespace {
// Reference value computed in long double straight from the formula.
double logpow_ref(double p, double c, double t) {
  const long double u = -std::log(static_cast<long double>(t));
  return static_cast<double>(std::pow(static_cast<long double>(c) + u, static_cast<long double>(p)));
}
}  // namespace

TEST_CASE("logpow golden values") {
  CHECK(Majorant::log_power(1, 2)(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(Majorant::log_power(0.5, 2)(std::exp(-2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  const double t = std::ldexp(1.0, -10);
  CHECK(Majorant::log_power(1, 2)(t) == doctest::Approx(2 + 10 * std::log(2.0)).epsilon(1e-15));
  for (double p : {0.25, 0.5, 1.5, 3.0})
    for (double tt : {1.0, 0.3, 1e-5, 1e-200})
      CHECK(Majorant::log_power(p, 2)(tt) == doctest::Approx(logpow_ref(p, 2, tt)).epsilon(1e-13));
}

TEST_CASE("log form agrees with t form") {
  const Majorant l = Majorant::log_power(0.75);
  for (double u : {0.0, 0.5, 3.0, 40.0}) CHECK(l.eval_log(u) == doctest::Approx(l(std::exp(-u))));
  // Far past binary64 underflow the log form still works.
  CHECK(l.eval_log(1e6) == doctest::Approx(std::pow(l.shift() + 1e6, 0.75)));
  CHECK_THROWS_AS(l(0.0), std::domain_error);
  CHECK_THROWS_AS(l(1.5), std::domain_error);
}

TEST_CASE("spec parsing") {
  const Majorant l = parse_majorant("logpow:p=0.5,c=2");
  CHECK(l.exponent() == 0.5);
  CHECK(l.shift() == 2.0);
  CHECK(parse_majorant("loglog").family() == MajorantFamily::LogLog);
  CHECK_THROWS_AS(parse_majorant("logpow:c=2"), ParseError);
  CHECK_THROWS_AS(parse_majorant("logpow:p=1,q=2"), ParseError);
  CHECK_THROWS_AS(parse_majorant("cubic:p=1"), ParseError);
}

TEST_CASE("admissible families") {
  for (double p : {0.25, 0.5, 1.0, 2.0}) {
    CAPTURE(p);
    CHECK(admissible(Majorant::log_power(p)).passed());
  }
  CHECK(admissible(Majorant::log_log()).passed());
  CHECK(admissible(Majorant::log_power(1, 2)).passed());
}

TEST_CASE("inverse t is rejected") {
  const Majorant inv = Majorant::custom("inv", [](double t) { return 1.0 / t; }, 0.5, 2.0);
  const auto r = admissible(inv);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.check("t*Lambda -> 0").passed);
}

TEST_CASE("zero at t=1 fails positivity") {
  const auto r = admissible(Majorant::log_power(1, 0));
  CHECK_FALSE(r.check("positive").passed);
  CHECK(r.check("positive").worst_index == 0);
}

TEST_CASE("growth classes along the log-power family") {
  const auto cs = default_c_samples();
  const auto grid = default_tail_log_grid();
  for (double p : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
    CAPTURE(p);
    const auto g = classify_growth(Majorant::log_power(p), cs, grid);
    CHECK((g.tag == GrowthTag::C1) == (p < 1));
    CHECK((g.tag == GrowthTag::C2) == (p > 1));
  }
  CHECK(classify_growth(Majorant::log_log(), cs, grid).tag == GrowthTag::C1);
}
