#include "korenblum/poisson.hpp"

#include "korenblum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Adaptive refinement of a Cantor construction tree. A group node holds
// 2^g kept stage-j pieces, each followed by its gap piece, spanning
// [a, a+span); a uniform node carries the equidistributed measure of a
// truncated construction. Node estimates use the two-point rule at
// mean +- standard deviation of the node measure (exact through degree 2).
template <class T>
class CantorTree {
 public:
  CantorTree(const CantorSpec& spec, int stages, const std::function<T(double)>& g, double tol_floor)
      : spec_(spec), stages_(stages), g_(g), tol_floor_(tol_floor) {
    centroid_.assign(CantorSpec::kStages + 2, 0.5);
    variance_.assign(CantorSpec::kStages + 2, 1.0 / 12);
    const int last = stages_ > 0 ? std::min(stages_, CantorSpec::kStages) : CantorSpec::kStages;
    for (int k = last; k >= 1; --k) {
      const double m = spec_.m_double(k);
      centroid_[k] = 0.5 - std::ldexp(1.0 - centroid_[k + 1], -static_cast<int>(std::min(m + 1, 2000.0)));
      // Cells i 2^-m, i < 2^m, each holding a 2^-(m+1) copy of the next stage.
      variance_[k] = (1.0 - std::ldexp(1.0, -static_cast<int>(std::min(2 * m, 2000.0)))) / 12 +
                     std::ldexp(variance_[k + 1], -static_cast<int>(std::min(2 * m + 2, 2000.0)));
    }
  }

  T integrate(double offset, double width, double mass, double tol) {
    Node root = descend({1, spec_.m_double(1), offset, width, false});
    const T est = estimate(root, mass);
    return refine(root, mass, est, tol, 0);
  }

  long evaluations() const { return evals_; }

 private:
  struct Node {
    int j;
    double gexp;
    double a;
    double span;
    bool uniform;
  };

  static constexpr double kMinSpan = 1.0 / 64;
  static constexpr int kMaxDepth = 400;
  static constexpr long kMaxEvaluations = 1L << 24;

  // Mean and standard deviation of the node measure, relative to span.
  std::pair<double, double> moments(const Node& n) const {
    if (n.uniform) return {0.5, std::sqrt(1.0 / 12)};
    const double c = n.j + 1 <= CantorSpec::kStages + 1 ? centroid_[n.j + 1] : 0.5;
    const double v = n.j + 1 <= CantorSpec::kStages + 1 ? variance_[n.j + 1] : 1.0 / 12;
    const int e = static_cast<int>(std::min(n.gexp + 1, 2000.0));
    const double mean = 0.5 - std::ldexp(1.0 - c, -e);
    const double var = (1.0 - std::ldexp(1.0, -static_cast<int>(std::min(2 * n.gexp, 2000.0)))) / 12 +
                       std::ldexp(v, -2 * e);
    return {mean, std::sqrt(var)};
  }

  T estimate(const Node& n, double mass) {
    const auto [mean, sd] = moments(n);
    evals_ += 2;
    return 0.5 * mass * (g_(n.a + n.span * (mean - sd)) + g_(n.a + n.span * (mean + sd)));
  }

  // A single kept piece has exactly one child; skip such links.
  Node descend(Node n) const {
    while (!n.uniform && n.gexp == 0.0) {
      const double piece = 0.5 * n.span;
      if ((stages_ > 0 && n.j >= stages_) || n.j >= CantorSpec::kStages) {
        n = {n.j, 0.0, n.a, piece, true};
      } else {
        n = {n.j + 1, spec_.m_double(n.j + 1), n.a, piece, false};
      }
    }
    return n;
  }

  T refine(const Node& n, double mass, T est, double tol, int depth) {
    if (depth > kMaxDepth || evals_ > kMaxEvaluations) {
      throw NumericError("Cantor-tree integration did not converge");
    }
    if (n.span < 1e-280) return est;
    Node c1, c2;
    if (n.uniform) {
      c1 = {n.j, 0.0, n.a, 0.5 * n.span, true};
      c2 = {n.j, 0.0, n.a + 0.5 * n.span, 0.5 * n.span, true};
    } else {
      c1 = descend({n.j, n.gexp - 1, n.a, 0.5 * n.span, false});
      c2 = descend({n.j, n.gexp - 1, n.a + 0.5 * n.span, 0.5 * n.span, false});
    }
    const double half = 0.5 * mass;
    const T e1 = estimate(c1, half);
    const T e2 = estimate(c2, half);
    const T sum = e1 + e2;
    // Below ~eps |sum| the difference is rounding noise.
    const double noise = 16 * std::numeric_limits<double>::epsilon() * (std::abs(e1) + std::abs(e2));
    if (n.span <= kMinSpan && std::abs(static_cast<T>(sum - est)) <= std::max(tol, noise)) return sum;
    const double t = std::max(0.5 * tol, tol_floor_);
    return refine(c1, half, e1, t, depth + 1) + refine(c2, half, e2, t, depth + 1);
  }

  const CantorSpec& spec_;
  int stages_;
  const std::function<T(double)>& g_;
  double tol_floor_;
  std::vector<double> centroid_;
  std::vector<double> variance_;
  long evals_ = 0;
};

template <class T>
T integrate_against_impl(const Premeasure& mu, const std::function<T(double)>& g,
                         const std::vector<double>& peaks, double peak_width,
                         const QuadratureOptions& opt) {
  struct Tree {
    const CantorSpec* spec;
    int stages;
    double offset, width, mass;
  };
  std::vector<Tree> trees;
  std::vector<double> breaks{0.0, 1.0};
  bool has_density = false;
  T atoms{};
  double singular_mass = 0.0;

  for (const auto& c : mu.components()) {
    std::visit(overloaded{
                   [&](const component::Lebesgue&) { has_density = true; },
                   [&](const component::Atom& x) { atoms += x.mass * g(x.pos); },
                   [&](const component::Trig&) { has_density = true; },
                   [&](const component::Step& x) {
                     has_density = true;
                     breaks.insert(breaks.end(), x.breaks.begin(), x.breaks.end());
                   },
                   [&](const component::Cantor& x) {
                     trees.push_back({&x.spec, x.stages, x.offset, x.width, x.coef});
                     singular_mass += std::abs(x.coef);
                   },
                   [&](const component::Example2& x) {
                     has_density = true;
                     const auto& d = *x.data;
                     breaks.insert(breaks.end(), d.start.begin(), d.start.end());
                     for (std::size_t k = 0; k < d.u.size(); ++k) {
                       trees.push_back({&d.base, 0, d.start[k], d.u[k], -x.scale * d.v[k]});
                       singular_mass += std::abs(x.scale * d.v[k]);
                     }
                   },
               },
               c);
  }

  T total = atoms;
  const double tol_density = trees.empty() ? opt.abs_tol : 0.5 * opt.abs_tol;
  if (has_density) {
    for (double p : peaks) {
      p -= std::floor(p);
      breaks.push_back(p);
      for (double s = 1; s <= 64; s *= 2) {
        for (double q : {p - s * peak_width, p + s * peak_width}) {
          q -= std::floor(q);
          breaks.push_back(q);
        }
      }
    }
    std::erase_if(breaks, [](double b) { return b < 0 || b > 1; });
    const std::vector<Component>& parts = mu.components();
    auto density = [&parts](double t) {
      double h = 0.0;
      for (const auto& c : parts) {
        std::visit(overloaded{
                       [&](const component::Lebesgue& x) { h += x.scale; },
                       [](const component::Atom&) {},
                       [&](const component::Trig& x) {
                         for (std::size_t i = 0; i < x.a.size(); ++i) {
                           const double w = 2 * kPi * static_cast<double>(i + 1) * t;
                           h += x.a[i] * std::cos(w) + x.b[i] * std::sin(w);
                         }
                       },
                       [&](const component::Step& x) {
                         auto it = std::upper_bound(x.breaks.begin(), x.breaks.end(), t);
                         const auto i = static_cast<std::size_t>(it - x.breaks.begin());
                         if (i >= 1 && i <= x.values.size()) h += x.values[i - 1];
                       },
                       [](const component::Cantor&) {},
                       [&](const component::Example2& x) {
                         const auto& d = *x.data;
                         auto it = std::upper_bound(d.start.begin(), d.start.end(), t);
                         const auto i = static_cast<std::size_t>(it - d.start.begin());
                         if (i >= 1 && i <= d.u.size()) h += x.scale * d.v[i - 1] / d.u[i - 1];
                       },
                   },
                   c);
      }
      return h;
    };
    auto integrand = [&](double t) -> T { return g(t) * density(t); };
    QuadratureOptions o = opt;
    o.abs_tol = tol_density;
    total += integrate<T>(integrand, breaks, o).value;
  }
  for (const auto& tr : trees) {
    if (tr.mass == 0.0) continue;
    const double share = 0.5 * opt.abs_tol * std::abs(tr.mass) / singular_mass;
    CantorTree<T> tree(*tr.spec, tr.stages, g, opt.abs_tol * 1e-6);
    total += tree.integrate(tr.offset, tr.width, tr.mass, share);
  }
  return total;
}

}  // namespace

double integrate_against(const Premeasure& mu, const std::function<double(double)>& g,
                         const std::vector<double>& peaks, double peak_width,
                         const QuadratureOptions& opt) {
  return integrate_against_impl<double>(mu, g, peaks, peak_width, opt);
}

Complex integrate_against(const Premeasure& mu, const std::function<Complex(double)>& g,
                          const std::vector<double>& peaks, double peak_width,
                          const QuadratureOptions& opt) {
  return integrate_against_impl<Complex>(mu, g, peaks, peak_width, opt);
}

double stieltjes_integral(const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime, const Premeasure& mu,
                          const QuadratureOptions& opt) {
  std::vector<double> breaks{0.0, 1.0};
  for (const auto& [pos, mass] : mu.atoms()) breaks.push_back(pos);
  auto integrand = [&](double t) { return fprime(t) * mu.mu_hat(t); };
  const double body = integrate<double>(integrand, breaks, opt).value;
  return f(1.0) * mu.total() - body;
}

double poisson_kernel(Complex z, double t) {
  const double r = std::abs(z);
  const double phi = std::arg(z) / (2 * kPi);
  const double s = std::sin(kPi * (t - phi));
  const double D = (1 - r) * (1 - r) + 4 * r * s * s;
  return (1 - r * r) / D;
}

double poisson_kernel_dt(Complex z, double t) {
  const double r = std::abs(z);
  const double phi = std::arg(z) / (2 * kPi);
  const double s = std::sin(kPi * (t - phi));
  const double D = (1 - r) * (1 - r) + 4 * r * s * s;
  return -(1 - r * r) * 4 * kPi * r * std::sin(2 * kPi * (t - phi)) / (D * D);
}

Complex herglotz_kernel(Complex z, double t) {
  const Complex e = std::polar(1.0, 2 * kPi * t);
  return (e + z) / (e - z);
}

QuadratureOptions scaled_options(QuadratureOptions opt, double r) {
  // The kernel peaks at (1+r)/(1-r); keep the target above binary64 noise.
  opt.abs_tol *= std::max(1.0, 1e-3 * (1 + r) / (1 - r));
  return opt;
}

void check_radius(Complex z) {
  if (!(std::abs(z) <= kMaxRadius)) {
    std::ostringstream os;
    os.precision(17);
    os << "|z| = " << std::abs(z) << " exceeds the supported radius " << kMaxRadius;
    throw NumericError(os.str());
  }
}

PoissonField::PoissonField(Premeasure source, PoissonOptions opt)
    : source_(std::make_shared<const Premeasure>(std::move(source))),
      opt_(opt),
      cache_(std::make_shared<Cache>()) {}

double PoissonField::operator()(Complex z) const {
  check_radius(z);
  const auto key = std::make_pair(z.real(), z.imag());
  {
    std::lock_guard<std::mutex> g(cache_->lock);
    auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const double r = std::abs(z);
  const double phi = std::arg(z) / (2 * kPi);
  std::function<double(double)> kernel = [z](double t) { return poisson_kernel(z, t); };
  const double v = integrate_against(*source_, kernel, {phi}, (1 - r) / (2 * kPi) + 1e-300,
                                     scaled_options(opt_.quadrature, r));
  std::lock_guard<std::mutex> g(cache_->lock);
  cache_->values[key] = v;
  return v;
}

double poisson_eval(const PoissonField& field, Complex z) { return field(z); }

GrowthBoundReport growth_bound_check(const PoissonField& field, const Majorant& lambda,
                                     const NormEstimate& norm, const std::vector<double>& radii,
                                     int angles) {
  if (!norm.certified_upper) throw std::invalid_argument("growth bound check needs a certified norm");
  if (angles < 1) throw std::invalid_argument("angles must be >= 1");
  GrowthBoundReport rep;
  rep.norm = *norm.certified_upper;
  for (double r : radii) {
    for (int i = 0; i < angles; ++i) {
      GrowthBoundRow row;
      row.r = r;
      row.theta = static_cast<double>(i) / angles;
      row.value = field(std::polar(r, 2 * kPi * row.theta));
      const double denom = rep.norm * lambda(1 - r);
      if (denom > 0) {
        row.ratio = row.value / denom;
      } else {
        row.ratio = row.value > 1e-12 ? INFINITY : 0.0;
      }
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.rows.push_back(row);
    }
  }
  rep.passed = rep.max_ratio <= kPoissonBoundConstant;
  return rep;
}

std::vector<RecoveryRow> recover_premeasure(const std::function<double(Complex)>& h, const Arc& I,
                                            const std::vector<double>& r_schedule,
                                            const QuadratureOptions& opt) {
  std::vector<RecoveryRow> out;
  const double a = I.start().to_double();
  const double len = length(I);
  for (double r : r_schedule) {
    if (!(r >= 0 && r <= kMaxRadius)) throw NumericError("recovery radius outside [0, 0.9999]");
    std::vector<double> breaks{a, a + len};
    const double w = (1 - r) / (2 * kPi);
    for (double s = 1; s <= 64; s *= 2) {
      for (double q : {a + s * w, a + len - s * w}) {
        if (q > a && q < a + len) breaks.push_back(q);
      }
    }
    auto f = [&](double t) { return h(std::polar(r, 2 * kPi * t)); };
    out.push_back({r, len > 0 ? integrate<double>(f, breaks, opt).value : 0.0});
  }
  return out;
}

double arc_harmonic_measure(double r, double s, double a, double len) {
  if (len >= 1) return 1.0;
  const double K = (1 + r) / (1 - r);
  auto Phi = [K](double u) {
    const double n = std::round(u);
    return n + std::atan(K * std::tan(kPi * (u - n))) / kPi;
  };
  return Phi(a - s + len) - Phi(a - s);
}

std::vector<RecoveryRow> recover_poisson(const Premeasure& mu, const Arc& I,
                                         const std::vector<double>& r_schedule,
                                         const QuadratureOptions& opt) {
  std::vector<RecoveryRow> out;
  const double a = I.start().to_double();
  const double len = length(I);
  for (double r : r_schedule) {
    if (!(r >= 0 && r <= kMaxRadius)) throw NumericError("recovery radius outside [0, 0.9999]");
    std::function<double(double)> g = [&](double s) { return arc_harmonic_measure(r, s, a, len); };
    out.push_back({r, integrate_against(mu, g, {a, a + len}, (1 - r) / (2 * kPi), opt)});
  }
  return out;
}

}  // namespace korenblum
