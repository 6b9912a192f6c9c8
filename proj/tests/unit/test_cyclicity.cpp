#include "doctest.h"
#include "korenblum/cyclicity.hpp"
#include "korenblum/spec_parse.hpp"

#include <cmath>
#include <numbers>

using namespace korenblum;

namespace {

constexpr double kPi = std::numbers::pi;

Premeasure atom_balanced() {
  return Premeasure::make({component::Lebesgue{1.0}, component::Atom{Turn(0, 1), 0.0, -1.0}});
}

Premeasure cantor_balanced(const CantorSpec& s) {
  return Premeasure::make({component::Lebesgue{1.0}, component::Cantor{s, -1.0}});
}

// Truncated Fourier product for the linear Cantor rule (stages with m_k <= 40).
Complex cantor_fourier_linear(int n) {
  Complex prod = 1.0;
  double L = 1.0;
  for (int k = 1; k <= 40; ++k) {
    const double cnt = std::ldexp(1.0, k);
    const double x = 2 * kPi * n * L / cnt;
    if (std::abs(std::sin(x / 2)) > 1e-300) prod *= std::polar(std::sin(cnt * x / 2) / (cnt * std::sin(x / 2)), (cnt - 1) * x / 2);
    L /= 2 * cnt;
  }
  return prod;
}

std::vector<Complex> grid(int n, double rmax) {
  std::vector<Complex> z;
  for (int j = 0; j < n; ++j) z.push_back(std::polar(rmax * (0.2 + 0.8 * ((j * 7) % n) / n), 2 * kPi * (j + 0.5) / n));
  return z;
}

}  // namespace

TEST_CASE("Herglotz exponential basics") {
  CHECK(herglotz_eval(Premeasure::zero(), Complex(0.3, 0.2)) == Complex(1.0, 0.0));
  const auto a = atom_balanced();
  CHECK(std::abs(herglotz_eval(a, 0.0) - 1.0) <= 1e-9);
  CHECK(std::abs(herglotz_eval(a, 0.5)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  // Closed form: 1 - (1+z)/(1-z) in the exponent.
  for (const auto& z : grid(16, 0.9)) {
    const Complex want = std::exp(1.0 - (1.0 + z) / (1.0 - z));
    CHECK(std::abs(herglotz_eval(a, z) - want) <= 1e-9 * std::abs(want));
  }
}

TEST_CASE("Herglotz integral of the Cantor family against its Fourier series") {
  const auto mu = cantor_balanced(CantorSpec::linear());
  for (const auto& z : grid(12, 0.9)) {
    Complex want = 0, zn = 1;
    for (int n = 1; n < 600; ++n) {
      zn *= z;
      want -= 2.0 * zn * std::conj(cantor_fourier_linear(n));
    }
    CHECK(std::abs(herglotz_integral(mu, z) - want) <= 1e-8);
  }
}

TEST_CASE("singular inner functions") {
  const Premeasure unit = Premeasure::raw({component::Atom{Turn(0, 1), 0.0, 1.0}});
  CHECK(std::abs(singular_inner(unit, 0.0) - std::exp(-1.0)) <= 1e-12);
  CHECK(std::abs(singular_inner(unit, -0.5) - std::exp(-1.0 / 3)) <= 1e-12);
  CHECK_THROWS_AS(singular_inner(Premeasure::raw({component::Lebesgue{1.0}}), 0.1), std::invalid_argument);

  const Premeasure cm = Premeasure::raw({component::Cantor{CantorSpec::linear(), 1.0}});
  const Premeasure bal = cantor_balanced(CantorSpec::linear());
  const Complex s0 = singular_inner(cm, 0.0);
  for (const auto& z : grid(16, 0.9)) {
    const Complex f = herglotz_eval(bal, z);
    CHECK(std::abs(f - singular_inner(cm, z) / s0) <= 1e-8 * std::abs(f));
  }
}

TEST_CASE("modulus identity on shipped families") {
  Example2Spec sp;
  sp.K = 16;
  const std::vector<Premeasure> fams = {atom_balanced(), cantor_balanced(CantorSpec::linear()),
                                        cantor_balanced(CantorSpec::example1(0.5)),
                                        parse_premeasure("trig:c1=0.4,s2=0.1"), example2_build(sp).mu};
  const Majorant l = Majorant::log_power(1, 2);
  for (const auto& mu : fams) {
    CAPTURE(mu.id());
    const PoissonField P(mu);
    const auto nrm = certified_norm_upper(mu, l);
    for (const auto& z : grid(64, 0.99)) {
      const Complex f = herglotz_eval(mu, z);
      const double m = std::exp(P(z));
      CHECK(std::abs(std::abs(f) - m) <= 1e-8 * m);
      CHECK(std::abs(f) > 0);
      if (nrm) CHECK(std::log(std::abs(f)) <= 10 * *nrm * l(1 - std::abs(z)) + 1e-9);
    }
    CHECK(std::abs(herglotz_eval(mu, 0.0) - 1.0) <= 1e-8);
  }
}

TEST_CASE("Taylor coefficient growth") {
  const Majorant l = Majorant::log_power(0.5);
  const auto one = taylor_growth_check([](Complex) { return Complex(1.0); }, l, 32, 0.5);
  // Round-off is amplified by r^-n.
  for (int n = 1; n <= 32; ++n) CHECK(one.coefficient_moduli[n] <= 1e-14 * std::ldexp(1.0, n));
  CHECK(one.C <= 1e-9);

  const auto geo = taylor_growth_check([](Complex z) { return 1.0 / (1.0 - z); }, l, 64, 0.9);
  // 128 samples alias a_{n+128j} r^{128j} onto a_n.
  const double alias = 1 / (1 - std::pow(0.9, 128));
  for (int n = 0; n <= 64; ++n) CHECK(geo.coefficient_moduli[n] == doctest::Approx(alias).epsilon(1e-12));
  CHECK(geo.C <= 1e-6);

  const auto a = atom_balanced();
  auto f = [&](Complex z) { return herglotz_eval(a, z); };
  const auto c64 = taylor_growth_check(f, l, 64, 0.9);
  const auto c128 = taylor_growth_check(f, l, 128, 0.9);
  // Coefficients of exp(1 - (1+z)/(1-z)) are bounded, so C stays small.
  CHECK(std::isfinite(c64.C));
  CHECK(c128.C <= c64.C + 1e-6);
}

TEST_CASE("Example 1 construction") {
  const auto ex = example1_build(0.5);
  for (int k = 1; k <= 12; ++k) {
    const double want = std::max(1.0, std::round(std::pow(2.0, 2.0 * k) / std::pow(k, 4.0)));
    CHECK(ex.spec.m_double(k) == want);
  }
  CHECK(ex.mu.balanced());
  CHECK(ex.positive.total() == doctest::Approx(1.0));
}

TEST_CASE("Example 2 construction") {
  Example2Spec sp;
  sp.K = 4096;
  const auto b = example2_build(sp);
  const auto& d = *b.data;
  CHECK(d.deficit < 1e-6);
  CHECK(d.start.back() == 1.0);
  for (int k = 0; k < d.K; k += 97) {
    const double a = d.start[k], w = d.u[k];
    CHECK(std::abs(b.mu.mu_hat(a + w) - b.mu.mu_hat(a)) <= 1e-12);
  }
  double sum_v = 0, sum_u = 0;
  for (int k = 0; k < d.K; ++k) {
    CHECK(d.v[k] > 0);
    CHECK(d.v[k] == doctest::Approx(d.u[k] * std::log(std::log(1 / d.u[k]))).epsilon(1e-12));
    if (k > 0) CHECK(d.u[k] < d.u[k - 1]);
    sum_v += d.v[k];
    sum_u += d.u[k];
  }
  CHECK(sum_u == doctest::Approx(1.0).epsilon(1e-12));
  // No Cauchy tolerance of 1e-3 over the last 1024 terms.
  double last = 0;
  for (int k = d.K - 1024; k < d.K; ++k) last += d.v[k];
  CHECK(last > 1e-3);
  CHECK(b.v_growth_floor > 0);
  CHECK_THROWS_AS(example2_build({0.5, 0, {}}), std::invalid_argument);
}

TEST_CASE("Example 2 is Lambda-bounded on dyadic arcs") {
  Example2Spec sp;
  sp.K = 64;
  const auto b = example2_build(sp);
  const Majorant l = Majorant::log_power(0.75);
  const auto est = norm_plus(b.mu, l, 10);
  REQUIRE(est.certified_upper.has_value());
  CHECK(est.lower_bound <= *est.certified_upper);
}

TEST_CASE("verdicts") {
  const Majorant half = Majorant::log_power(0.5);
  CHECK(verdict(Premeasure::zero(), half).verdict == Verdict::Cyclic);
  const auto a = verdict(atom_balanced(), half);
  CHECK(a.verdict == Verdict::NotCyclic);
  bool found = false;
  for (const auto& c : a.candidates) {
    if (c.result && c.carleson_certified) {
      CHECK(c.result->value == doctest::Approx(-1.0));
      found = true;
    }
  }
  CHECK(found);
  const auto neither = verdict(atom_balanced(), Majorant::log_power(1.0));
  CHECK(neither.verdict == Verdict::Inconclusive);
  const auto dens = verdict(parse_premeasure("trig:c1=0.5"), Majorant::log_power(2.0));
  CHECK(dens.verdict == Verdict::Cyclic);
  CHECK(dens.grade == "analytic+computational");
}

TEST_CASE("Example 1 dichotomy") {
  const auto ex = example1_build(0.5);
  const auto sw = alpha_sweep(ex.mu, {0.25, 0.5, 0.75});
  REQUIRE(sw.reports.size() == 3);
  CHECK(sw.reports[0].verdict == Verdict::NotCyclic);
  CHECK(sw.reports[1].verdict == Verdict::NotCyclic);
  CHECK(sw.reports[2].verdict == Verdict::Cyclic);
  CHECK(sw.flips == 1);
  CHECK(sw.single_flip);
}
