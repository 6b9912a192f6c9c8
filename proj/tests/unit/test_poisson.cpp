#include "doctest.h"
#include "korenblum/errors.hpp"
#include "korenblum/cyclicity.hpp"
#include "korenblum/poisson.hpp"
#include "korenblum/spec_parse.hpp"

#include <cmath>
#include <numbers>

using namespace korenblum;

namespace {

constexpr double kPi = std::numbers::pi;

Premeasure atom_balanced(double at = 0.0) {
  return Premeasure::make({component::Lebesgue{1.0}, component::Atom{Turn::from_double(at), at, -1.0}});
}

Premeasure cantor_balanced(const CantorSpec& s) {
  return Premeasure::make({component::Lebesgue{1.0}, component::Cantor{s, -1.0}});
}

// int e^{2 pi i n t} dmu~ for the canonical Cantor measure: the support is
// the set of sums of the stage offsets j L_k 2^-m_k, each stage uniform.
Complex cantor_fourier(const CantorSpec& s, int n) {
  Complex prod = 1.0;
  double L = 1.0;
  for (int k = 1; k <= 60 && L > 1e-300; ++k) {
    const double m = s.m_double(k);
    if (m > 40) break;  // later stages: offsets below 2^-40 per unit frequency
    const double step = L * std::ldexp(1.0, -static_cast<int>(m));
    const double cnt = std::ldexp(1.0, static_cast<int>(m));
    const double x = 2 * kPi * n * step;
    // Mean of e^{i j x}, j = 0..cnt-1.
    Complex a;
    if (std::abs(std::sin(x / 2)) < 1e-300) {
      a = 1.0;
    } else {
      a = std::polar(std::sin(cnt * x / 2) / (cnt * std::sin(x / 2)), (cnt - 1) * x / 2);
    }
    prod *= a;
    L = L * std::ldexp(1.0, -static_cast<int>(m) - 1);
  }
  return prod;
}

// P[m - mu~](z) = -2 Re sum_{n>=1} r^n e^{-2 pi i n s} phi(n).
double cantor_poisson_series(const CantorSpec& s, Complex z) {
  const double r = std::abs(z), th = std::arg(z) / (2 * kPi);
  double acc = 0, rn = 1;
  for (int n = 1; n < 4000 && rn > 1e-18; ++n) {
    rn *= r;
    acc += rn * (std::polar(1.0, -2 * kPi * n * th) * cantor_fourier(s, n)).real();
  }
  return -2 * acc;
}

double closed_atom(Complex z) {
  const double r = std::abs(z);
  return 1 - (1 - r * r) / std::norm(1.0 - z);
}

}  // namespace

TEST_CASE("golden Poisson values") {
  const PoissonField f(atom_balanced());
  CHECK(std::abs(f(-0.5) - 2.0 / 3.0) <= 1e-8);
  CHECK(std::abs(f(0.5) + 2.0) <= 1e-8);
  for (int j = 0; j < 16; ++j) {
    const Complex z = std::polar(0.95, 2 * kPi * j / 16 + 0.1);
    CHECK(f(z) == doctest::Approx(closed_atom(z)).epsilon(1e-9));
  }
  const PoissonField zero(Premeasure::zero());
  CHECK(zero(Complex(0.3, -0.4)) == 0.0);
  CHECK_THROWS_AS(f(Complex(0.99995, 0)), NumericError);
}

TEST_CASE("Stieltjes integrals") {
  const Premeasure a = atom_balanced();
  auto one = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  CHECK(std::abs(stieltjes_integral(one, zero, a)) <= 1e-12);
  auto c = [](double t) { return std::cos(2 * kPi * t); };
  auto dc = [](double t) { return -2 * kPi * std::sin(2 * kPi * t); };
  auto s = [](double t) { return std::sin(2 * kPi * t); };
  auto ds = [](double t) { return 2 * kPi * std::cos(2 * kPi * t); };
  CHECK(stieltjes_integral(c, dc, a) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::abs(stieltjes_integral(s, ds, a)) <= 1e-10);

  // By parts and component-wise integration agree on the Cantor family.
  const Premeasure cm = cantor_balanced(CantorSpec::linear());
  const double by_parts = stieltjes_integral(c, dc, cm, {1e-8, 1 << 18});
  const double direct = integrate_against(cm, std::function<double(double)>(c), {}, 1.0, {1e-12, 1 << 18});
  CHECK(std::abs(by_parts - direct) <= 1e-7);
  CHECK(direct == doctest::Approx(-cantor_fourier(CantorSpec::linear(), 1).real()).epsilon(1e-10));
}

TEST_CASE("Cantor integration against the Fourier product") {
  for (const CantorSpec& s : {CantorSpec::linear(), CantorSpec::example1(0.5)}) {
    const PoissonField f(cantor_balanced(s));
    for (double r : {0.5, 0.9, 0.97}) {
      for (int j = 0; j < 8; ++j) {
        const Complex z = std::polar(r, 2 * kPi * (j + 0.3) / 8);
        CAPTURE(z);
        CHECK(std::abs(f(z) - cantor_poisson_series(s, z)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("stage-truncated Cantor measure against exact piecewise integrals") {
  const CantorSpec s = CantorSpec::linear();
  component::Cantor c{s, -1.0};
  c.stages = 3;
  const Premeasure mu = Premeasure::make({component::Lebesgue{1.0}, c});
  const auto kept = cantor_stage(s, 3).kept;
  auto g = [](double t) { return std::cos(2 * kPi * t) + 0.5 * std::sin(6 * kPi * t); };
  double expect = 0;
  for (const auto& arc : kept) {
    const double a = arc.start().to_double(), b = arc.end().to_double();
    const double w = 1.0 / static_cast<double>(kept.size());
    const double G = (std::sin(2 * kPi * b) - std::sin(2 * kPi * a)) / (2 * kPi) -
                     0.5 * (std::cos(6 * kPi * b) - std::cos(6 * kPi * a)) / (6 * kPi);
    expect -= w * G / (b - a);
  }
  const double got = integrate_against(mu, std::function<double(double)>(g), {}, 1.0, {1e-12, 1 << 18});
  CHECK(got == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("value at the origin and linearity") {
  Example2Spec sp;
  sp.K = 16;
  const std::vector<Premeasure> fams = {atom_balanced(0.3), cantor_balanced(CantorSpec::linear()),
                                        parse_premeasure("trig:c1=0.4,s2=0.1"),
                                        parse_premeasure("step:breaks=0;0.25;1,values=3;-1"),
                                        example2_build(sp).mu};
  for (const auto& mu : fams) CHECK(std::abs(PoissonField(mu)(0.0)) <= 1e-9);

  const Premeasure m1 = fams[0], m2 = fams[1];
  const PoissonField f1(m1), f2(m2), f12(combine(2.0, m1, -0.5, m2));
  for (int j = 0; j < 64; ++j) {
    const Complex z = std::polar(0.3 + 0.6 * (j % 8) / 8.0, 2 * kPi * j / 64);
    CHECK(std::abs(f12(z) - (2 * f1(z) - 0.5 * f2(z))) <= 2e-9);
  }
}

TEST_CASE("growth bound on the test grid") {
  const Majorant l = Majorant::log_power(1, 2);
  const std::vector<double> radii{0.9, 0.99, 0.999};
  for (const auto& mu : {atom_balanced(), cantor_balanced(CantorSpec::linear())}) {
    const auto norm = norm_plus(mu, l, 10);
    REQUIRE(norm.certified_upper.has_value());
    const auto rep = growth_bound_check(PoissonField(mu), l, norm, radii, 256);
    CHECK(rep.rows.size() == 768);
    CHECK(rep.passed);
    CHECK(rep.max_ratio <= 10);
  }
  const auto z = growth_bound_check(PoissonField(Premeasure::zero()), l, norm_plus(Premeasure::zero(), l, 4), radii, 16);
  CHECK(z.max_ratio == 0.0);
}

TEST_CASE("harmonic measure of an arc") {
  // Closed form against direct quadrature of the kernel.
  for (double r : {0.2, 0.8, 0.99}) {
    for (double s : {0.0, 0.3, 0.77}) {
      const Complex z = std::polar(r, 2 * kPi * s);
      auto k = [&](double t) { return poisson_kernel(z, t); };
      const double q = integrate<double>(k, std::vector<double>{0.1, 0.35, 0.6}, QuadratureOptions{1e-13, 1 << 16}).value;
      CHECK(arc_harmonic_measure(r, s, 0.1, 0.5) == doctest::Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("recovery of arc masses") {
  std::vector<double> rs;
  for (int j = 4; j <= 12; ++j) rs.push_back(1 - std::ldexp(1.0, -j));
  const Arc I = Arc::make(ArcKind::RightOpen, Turn(1, 4), Turn(3, 4));

  const auto tr = recover_premeasure(closed_atom, I, rs);
  double prev = 1e9;
  for (const auto& row : tr) {
    const double e = std::abs(row.value - 0.5);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev <= 0.01);

  const auto zero = recover_premeasure([](Complex) { return 0.0; }, I, rs);
  for (const auto& row : zero) CHECK(row.value == 0.0);

  const auto full = recover_premeasure(closed_atom, Arc::full(), {0.5, 0.9});
  for (const auto& row : full) CHECK(std::abs(row.value) <= 1e-8);

  const Premeasure cm = cantor_balanced(CantorSpec::linear());
  const Arc J = Arc::make(ArcKind::RightOpen, Turn(3, 16), Turn(5, 8));
  const auto cr = recover_poisson(cm, J, rs);
  prev = 1e9;
  for (const auto& row : cr) {
    const double e = std::abs(row.value - cm.eval(J));
    CHECK(e <= prev);
    prev = e;
  }
  CHECK(prev <= 0.01);
  // The exchanged form matches the plain arc integral of P[mu].
  const PoissonField f(cm);
  const auto plain = recover_premeasure([&](Complex z) { return f(z); }, J, {0.75});
  CHECK(plain[0].value == doctest::Approx(recover_poisson(cm, J, {0.75})[0].value).epsilon(1e-7));
}
