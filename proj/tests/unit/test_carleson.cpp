#include "doctest.h"
#include "korenblum/carleson.hpp"
#include "korenblum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace korenblum;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Measure of the union of closed balls of radius r (turns) around pts on T,
// by a plain sweep over the unrolled line.
double union_length(std::vector<double> pts, double r) {
  if (r >= 0.5) return 1.0;
  std::vector<std::pair<double, double>> iv;
  for (double p : pts) {
    double a = p - r, b = p + r;
    if (a < 0) {
      iv.push_back({a + 1, 1});
      a = 0;
    }
    if (b > 1) {
      iv.push_back({0, b - 1});
      b = 1;
    }
    iv.push_back({a, b});
  }
  std::sort(iv.begin(), iv.end());
  double total = 0, cur_a = iv[0].first, cur_b = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= cur_b) {
      cur_b = std::max(cur_b, iv[i].second);
    } else {
      total += cur_b - cur_a;
      cur_a = iv[i].first;
      cur_b = iv[i].second;
    }
  }
  return std::min(1.0, total + cur_b - cur_a);
}

double arcs_length(const std::vector<Arc>& arcs) {
  double s = 0;
  for (const auto& a : arcs) s += length(a);
  return s;
}

}  // namespace

TEST_CASE("entropy golden values") {
  const Majorant l = Majorant::log_power(1, 2);
  CHECK(entropy(CarlesonSet::points({Turn(0, 1)}), l, 10).partial_sum == doctest::Approx(2.0));
  const auto two = entropy(CarlesonSet::points({Turn(0, 1), Turn(1, 2)}), l, 10);
  CHECK(two.partial_sum == doctest::Approx(2 + std::log(2.0)).epsilon(1e-14));

  // Stage-2 linear Cantor: 2 gaps of 2^-2 and 8 gaps of 2^-5.
  const Majorant h = Majorant::log_power(0.5, 2);
  const double ln2 = std::log(2.0);
  const double expect = 2 * 0.25 * std::sqrt(2 + 2 * ln2) + 8 * std::ldexp(1.0, -5) * std::sqrt(2 + 5 * ln2);
  const auto census = entropy(CarlesonSet::cantor_limit(CantorSpec::linear(), 0, 1, 2), h, 1 << 10);
  CHECK(census.partial_sum == doctest::Approx(expect).epsilon(1e-14));
  // The closure merges the last stage-2 gap of each piece into the next
  // stage-1 gap: 2 arcs of 9/32 and 6 of 1/32.
  const double closure = 2 * (9.0 / 32) * std::sqrt(2 + std::log(32.0 / 9)) + 6.0 / 32 * std::sqrt(2 + 5 * ln2);
  const auto st = entropy(CarlesonSet::cantor_stage(CantorSpec::linear(), 2), h, 1 << 10);
  CHECK(st.partial_sum == doctest::Approx(closure).epsilon(1e-14));
}

TEST_CASE("entropy partial sums are non-decreasing") {
  const Majorant l = Majorant::log_power(0.5);
  const CarlesonSet F = CarlesonSet::cantor_stage(CantorSpec::linear(), 3);
  double prev = 0;
  for (int n = 1; n <= 80; ++n) {
    const double s = entropy(F, l, n).partial_sum;
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("stage census identities") {
  const CantorSpec s = CantorSpec::linear();
  const auto census = cantor_census(s, 40);
  double gap_total = 0;
  for (const auto& c : census) {
    const BigInt M = BigInt(c.k) * (c.k + 1) / 2;
    CHECK(c.m == c.k);
    CHECK(c.M == M);
    CHECK(c.gap_count_log2 == M);
    CHECK(c.gap_len_log2 == -(c.k + M));
    CHECK(c.gap_measure == std::ldexp(1.0, -c.k));
    gap_total += c.gap_measure;
  }
  CHECK(gap_total == doctest::Approx(1 - std::ldexp(1.0, -40)));

  const auto e1 = CantorSpec::example1(0.5);
  for (int k = 1; k <= 20; ++k) {
    const double want = std::max(1.0, std::round(std::pow(2.0, 2.0 * k) * std::pow(k, -4.0)));
    CHECK(e1.m_double(k) == want);
  }
  CHECK(e1.max_M_over_m(60) < 10);
}

TEST_CASE("explicit stages") {
  const auto s1 = cantor_stage(CantorSpec::linear(), 1);
  REQUIRE(s1.kept.size() == 2);
  REQUIRE(s1.gaps.size() == 2);
  for (const auto& a : s1.kept) CHECK(a.exact_length() == Rational(1, 4));
  for (const auto& a : s1.gaps) CHECK(a.exact_length() == Rational(1, 4));

  const auto s2 = cantor_stage(CantorSpec::linear(), 2);
  CHECK(s2.kept.size() == 8);
  int stage2 = 0;
  for (const auto& g : s2.gaps) stage2 += g.exact_length() == Rational(1, 32);
  CHECK(stage2 == 8);
  // M_6 = 21 > 20.
  CHECK_THROWS_AS(cantor_stage(CantorSpec::linear(), 6), ResolutionError);
}

TEST_CASE("entropy series") {
  const auto e1 = CantorSpec::example1(0.5);
  const auto conv = cantor_entropy_series(e1, Majorant::log_power(0.5), 60);
  CHECK(conv.converges);
  CHECK_FALSE(conv.diverges);
  const auto div = cantor_entropy_series(e1, Majorant::log_power(0.75), 60);
  CHECK(div.diverges);
  CHECK_FALSE(div.converges);

  const Majorant l = Majorant::log_power(0.5, 2);
  const auto lin = cantor_entropy_series(CantorSpec::linear(), l, 60);
  CHECK(lin.converges);
  double sum = 0;
  for (const auto& r : lin.rows) {
    const double k = r.k;
    const double term = std::ldexp(1.0, -r.k) * std::sqrt(2 + (k + k * (k + 1) / 2) * std::log(2.0));
    sum += term;
    CHECK(r.term == doctest::Approx(term).epsilon(1e-13));
    CHECK(r.partial_sum == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("neighborhoods") {
  const auto one = neighborhood(CarlesonSet::points({Turn(0, 1)}), 0.1 * kTwoPi);
  REQUIRE(one.size() == 1);
  CHECK(length(one[0]) == doctest::Approx(0.2));
  CHECK(one[0].kind() == ArcKind::Closed);

  const auto full = neighborhood(CarlesonSet::points({Turn(0, 1), Turn(1, 2)}), 0.3 * kTwoPi);
  REQUIRE(full.size() == 1);
  CHECK(full[0].kind() == ArcKind::Full);

  std::vector<Turn> ends;
  std::vector<double> endsd;
  for (const auto& a : cantor_stage(CantorSpec::linear(), 2).kept) {
    ends.push_back(a.start());
    ends.push_back(a.end().wrapped());
  }
  for (const auto& t : ends) endsd.push_back(t.to_double());
  const CarlesonSet F = CarlesonSet::points(ends);
  double prev = 0;
  for (int j = 9; j >= 4; --j) {
    const double d = std::ldexp(1.0, -j);
    const auto nb = neighborhood(F, d * kTwoPi);
    CHECK(arcs_length(nb) == doctest::Approx(union_length(endsd, d)).epsilon(1e-12));
    CHECK(arcs_length(nb) >= prev);
    prev = arcs_length(nb);
  }
}

TEST_CASE("neighborhoods are nested") {
  const CarlesonSet F = CarlesonSet::cantor_stage(CantorSpec::linear(), 2);
  const auto small = neighborhood(F, 0.01);
  const auto big = neighborhood(F, 0.03);
  for (int j = 0; j < 4096; ++j) {
    const Turn t(j, 4096);
    const bool in_small = std::any_of(small.begin(), small.end(), [&](const Arc& a) { return a.contains(t); });
    const bool in_big = std::any_of(big.begin(), big.end(), [&](const Arc& a) { return a.contains(t); });
    if (in_small) CHECK(in_big);
  }
}

TEST_CASE("modulus of continuity") {
  const Premeasure leb = Premeasure::raw({component::Lebesgue{1.0}});
  for (double t : {0.5, 0.125, 1.0 / 1024}) CHECK(modulus_of_continuity(leb, t, 12) == doctest::Approx(t));
  const Premeasure cm = Premeasure::raw({component::Cantor{CantorSpec::linear(), 1.0}});
  CHECK(modulus_of_continuity(cm, 0.25, 10) == doctest::Approx(0.5));

  const auto rep = cantor_omega_bound(CantorSpec::example1(0.5), Majorant::log_power(0.75));
  CHECK(rep.bounded);
  CHECK(rep.max_ratio < 10);
}
