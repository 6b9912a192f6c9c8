#include "doctest.h"
#include "korenblum/cyclicity.hpp"
#include "korenblum/premeasure.hpp"
#include "korenblum/spec_parse.hpp"

#include <cmath>
#include <random>

using namespace korenblum;

namespace {

Premeasure atom_balanced(double at = 0.0) {
  return Premeasure::make({component::Lebesgue{1.0},
                           component::Atom{Turn::from_double(at), at, -1.0}});
}

Premeasure cantor_balanced(const CantorSpec& s) {
  return Premeasure::make({component::Lebesgue{1.0}, component::Cantor{s, -1.0}});
}

// Digit recursion for the linear rule, written independently of CantorSpec.
double cantor_cdf_linear(double x, int stages) {
  double mass = 0.0, scale = 1.0;
  for (int k = 1; k <= stages; ++k) {
    const double pieces = std::ldexp(1.0, k + 1);
    const double y = x * pieces;
    const double i = std::floor(y);
    mass += scale * std::ceil(i / 2) / (pieces / 2);
    if (std::fmod(i, 2.0) != 0.0) return mass;
    scale /= pieces / 2;
    x = y - i;
  }
  return mass + scale * x;
}

}  // namespace

TEST_CASE("mu_hat golden values") {
  const Premeasure leb = Premeasure::raw({component::Lebesgue{1.0}});
  CHECK(leb.mu_hat(0.5) == 0.5);
  const Premeasure a = atom_balanced();
  CHECK(a.mu_hat(0.5) == doctest::Approx(-0.5));
  CHECK(a.mu_hat(1.0) == doctest::Approx(0.0));
  const Premeasure c = cantor_balanced(CantorSpec::linear());
  CHECK(c.mu_hat(0.25) == doctest::Approx(0.25 - 0.5).epsilon(1e-14));
}

TEST_CASE("left continuity at an atom") {
  const Premeasure a = atom_balanced(0.375);
  CHECK(a.mu_hat(0.375) == doctest::Approx(0.375));
  CHECK(a.mu_hat(std::nextafter(0.375, 1.0)) == doctest::Approx(0.375 - 1));
  CHECK(a.jump(0.375) == -1.0);
  REQUIRE(a.atoms().size() == 1);
}

TEST_CASE("arc evaluation") {
  const Premeasure a = atom_balanced();
  CHECK(a.eval(Arc::full()) == 0.0);
  CHECK(a.eval(Arc::make(ArcKind::RightOpen, Turn(1, 4), Turn(3, 4))) == doctest::Approx(0.5));
  CHECK(a.eval(Arc::point(Turn(0, 1))) == doctest::Approx(-1.0));
  CHECK(a.eval(Arc::make(ArcKind::Open, Turn(0, 1), Turn(1, 2))) == doctest::Approx(0.5));
  CHECK(a.eval(Arc::make(ArcKind::Closed, Turn(0, 1), Turn(1, 2))) == doctest::Approx(-0.5));
  // Wrapping arc [3/4, 1/4) holds the atom.
  CHECK(a.eval(Arc::make(ArcKind::RightOpen, Turn(3, 4), Turn(1, 4))) == doctest::Approx(-0.5));
}

TEST_CASE("balance is enforced") {
  CHECK_THROWS_AS(Premeasure::make({component::Lebesgue{1.0}}), std::invalid_argument);
  CHECK_NOTHROW(Premeasure::raw({component::Lebesgue{1.0}}));
  CHECK_THROWS_AS(Premeasure::make({component::Trig{{1.0}, {}}}), std::invalid_argument);
}

TEST_CASE("combine") {
  const Premeasure a = atom_balanced();
  const Premeasure z = combine(1, a, -1, a);
  for (double t : {0.1, 0.5, 0.9}) CHECK(z.mu_hat(t) == doctest::Approx(0.0));
  CHECK(combine(2, a, 0, atom_balanced(0.5)).mu_hat(0.5) == doctest::Approx(-1.0));
  const Premeasure two = combine(1, a, 1, atom_balanced(0.5));
  CHECK(two.eval(Arc::point(Turn(0, 1))) == doctest::Approx(-1.0));
  CHECK(two.eval(Arc::point(Turn(1, 2))) == doctest::Approx(-1.0));
  CHECK(two.atoms().size() == 2);
}

TEST_CASE("Cantor distribution against an independent digit recursion") {
  const CantorSpec s = CantorSpec::linear();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double x = std::ldexp(static_cast<double>(rng() >> 20), -44);
    CAPTURE(x);
    CHECK(s.cdf(x) == doctest::Approx(cantor_cdf_linear(x, 8)).epsilon(1e-12));
    CHECK(s.cdf(x, 3) == doctest::Approx(cantor_cdf_linear(x, 3)).epsilon(1e-12));
  }
  CHECK(s.cdf(1.0) == 1.0);
  // Gap (1/4, 1/2) carries no mass.
  CHECK(s.cdf(0.3) == doctest::Approx(0.5));
  CHECK(s.cdf(0.45) == doctest::Approx(0.5));
}

TEST_CASE("additivity over adjacent dyadic arcs") {
  const Example2Build ex2 = [] {
    Example2Spec sp;
    sp.K = 16;
    return example2_build(sp);
  }();
  const std::vector<Premeasure> fams = {
      atom_balanced(0.25),
      cantor_balanced(CantorSpec::linear()),
      cantor_balanced(CantorSpec::example1(0.5)),
      parse_premeasure("trig:c1=0.3,s2=-0.2"),
      parse_premeasure("step:breaks=0;0.5;1,values=1;-1"),
      ex2.mu,
  };
  std::mt19937_64 rng(11);
  for (const auto& mu : fams) {
    CAPTURE(mu.id());
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
      const int d = 1 + static_cast<int>(rng() % 20);
      const std::int64_t n = std::int64_t{1} << d;
      const std::int64_t a = static_cast<std::int64_t>(rng() % n);
      const std::int64_t l1 = 1 + static_cast<std::int64_t>(rng() % (n - 1 > 0 ? n - 1 : 1));
      const std::int64_t l2 = 1 + static_cast<std::int64_t>(rng() % (n - l1 > 0 ? n - l1 : 1));
      if (l1 + l2 > n) continue;
      const Turn s(a, n), m(a + l1, n), e(a + l1 + l2, n);
      const double lhs = mu.eval(Arc::make(ArcKind::RightOpen, s, e));
      const double rhs = mu.eval(Arc::make(ArcKind::RightOpen, s, m)) +
                         mu.eval(Arc::make(ArcKind::RightOpen, m, e));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-12);
    CHECK(mu.eval(Arc::full()) == 0.0);
    CHECK(std::abs(mu.mu_hat(1.0)) <= Premeasure::kBalanceTolerance);
  }
}

TEST_CASE("norm_plus") {
  const Majorant l = Majorant::log_power(1, 2);
  const Premeasure leb = parse_premeasure("lebesgue:1 + lebesgue:-1");
  CHECK(norm_plus(leb, l, 6).lower_bound == 0.0);
  CHECK(norm_plus(Premeasure::zero(), l, 6).lower_bound == 0.0);

  const Premeasure a = atom_balanced();
  double prev = 0;
  for (int d = 1; d <= 10; ++d) {
    const double lb = norm_plus(a, l, d).lower_bound;
    CHECK(lb >= prev);
    CHECK(lb <= 0.5 + 1e-15);
    prev = lb;
  }
  // Arcs missing the atom: (1-2^-d)/Lambda(1-2^-d) approaches 1/Lambda(1).
  const double d10 = 1 - std::ldexp(1.0, -10);
  CHECK(prev >= d10 / l(d10) - 1e-12);
  const auto est = norm_plus(a, l, 10);
  REQUIRE(est.certified_upper.has_value());
  CHECK(*est.certified_upper == doctest::Approx(0.5));
  CHECK(est.lower_bound <= *est.certified_upper);
}

TEST_CASE("norm homogeneity") {
  const Majorant l = Majorant::log_power(0.5);
  const Premeasure mu = cantor_balanced(CantorSpec::linear());
  const double base = norm_plus(mu, l, 9).lower_bound;
  for (double c : {0.5, 2.0, 8.0}) CHECK(norm_plus(mu.scaled(c), l, 9).lower_bound == doctest::Approx(c * base).epsilon(1e-14));
}

TEST_CASE("weak convergence report") {
  const Majorant l = Majorant::log_power(0.5);
  const Premeasure mu = atom_balanced();
  const std::vector<Turn> th = {Turn(1, 8), Turn(3, 8), Turn(5, 8)};
  auto same = weak_convergence_check({mu, mu, mu}, mu, l, th);
  for (double d : same.max_diff) CHECK(d == 0.0);

  std::vector<Premeasure> seq;
  for (int n = 1; n <= 6; ++n) seq.push_back(mu.scaled(1 - 1.0 / n));
  auto r = weak_convergence_check(seq, mu, l, th);
  CHECK(r.diffs_non_increasing);
  for (int n = 1; n <= 6; ++n)
    CHECK(r.diff[n - 1][1] == doctest::Approx(std::abs(mu.mu_hat(th[1])) / n));

  const CantorSpec s = CantorSpec::linear();
  std::vector<Premeasure> stages;
  for (int n = 1; n <= 8; ++n) {
    component::Cantor c{s, -1.0};
    c.stages = n;
    stages.push_back(Premeasure::make({component::Lebesgue{1.0}, c}));
  }
  // Dyadic points off the construction endpoints.
  auto cr = weak_convergence_check(stages, cantor_balanced(s), l, {Turn(3, 1024), Turn(700, 1024)});
  CHECK(cr.max_diff.back() < cr.max_diff.front());
  CHECK(cr.max_diff.back() < 1e-3);
}
