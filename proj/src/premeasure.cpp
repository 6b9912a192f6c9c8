#include "korenblum/premeasure.hpp"

#include "korenblum/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp01(double t) { return t < 0 ? 0.0 : (t > 1 ? 1.0 : t); }

double magnitude(const Component& c) {
  return std::visit(
      overloaded{
          [](const component::Lebesgue& x) { return std::abs(x.scale); },
          [](const component::Atom& x) { return std::abs(x.mass); },
          [](const component::Trig& x) {
            double s = 0;
            for (double v : x.a) s += std::abs(v);
            for (double v : x.b) s += std::abs(v);
            return s;
          },
          [](const component::Step& x) {
            double s = 0;
            for (double v : x.values) s += std::abs(v);
            return s;
          },
          [](const component::Cantor& x) { return std::abs(x.coef); },
          [](const component::Example2& x) { return std::abs(x.scale); },
      },
      c);
}

bool is_zero(const Component& c) { return magnitude(c) == 0.0; }

void scale_component(Component& c, double f) {
  std::visit(overloaded{
                 [f](component::Lebesgue& x) { x.scale *= f; },
                 [f](component::Atom& x) { x.mass *= f; },
                 [f](component::Trig& x) {
                   for (double& v : x.a) v *= f;
                   for (double& v : x.b) v *= f;
                 },
                 [f](component::Step& x) {
                   for (double& v : x.values) v *= f;
                 },
                 [f](component::Cantor& x) { x.coef *= f; },
                 [f](component::Example2& x) { x.scale *= f; },
             },
             c);
}

// Adds `c` into `acc` if they are like terms.
bool try_merge(Component& acc, const Component& c) {
  if (acc.index() != c.index()) return false;
  return std::visit(
      overloaded{
          [&](component::Lebesgue& x) {
            x.scale += std::get<component::Lebesgue>(c).scale;
            return true;
          },
          [&](component::Atom& x) {
            const auto& y = std::get<component::Atom>(c);
            if (!(x.position == y.position)) return false;
            x.mass += y.mass;
            return true;
          },
          [&](component::Trig& x) {
            const auto& y = std::get<component::Trig>(c);
            x.a.resize(std::max(x.a.size(), y.a.size()), 0.0);
            x.b.resize(std::max(x.b.size(), y.b.size()), 0.0);
            for (std::size_t i = 0; i < y.a.size(); ++i) x.a[i] += y.a[i];
            for (std::size_t i = 0; i < y.b.size(); ++i) x.b[i] += y.b[i];
            return true;
          },
          [&](component::Step& x) {
            const auto& y = std::get<component::Step>(c);
            if (x.breaks != y.breaks) return false;
            for (std::size_t i = 0; i < x.values.size(); ++i) x.values[i] += y.values[i];
            return true;
          },
          [&](component::Cantor& x) {
            const auto& y = std::get<component::Cantor>(c);
            if (x.spec.id() != y.spec.id() || x.offset != y.offset || x.width != y.width ||
                x.stages != y.stages) {
              return false;
            }
            x.coef += y.coef;
            return true;
          },
          [&](component::Example2& x) {
            const auto& y = std::get<component::Example2>(c);
            if (x.data != y.data) return false;
            x.scale += y.scale;
            return true;
          },
      },
      acc);
}

void validate(const Component& c) {
  std::visit(overloaded{
                 [](const component::Lebesgue&) {},
                 [](const component::Atom&) {},
                 [](const component::Trig& x) {
                   if (x.a.size() != x.b.size()) {
                     throw std::invalid_argument("trig density needs matching cos/sin lists");
                   }
                 },
                 [](const component::Step& x) {
                   if (x.breaks.size() != x.values.size() + 1 || x.breaks.front() != 0.0 ||
                       x.breaks.back() != 1.0) {
                     throw std::invalid_argument("step density breaks must run from 0 to 1");
                   }
                   for (std::size_t i = 1; i < x.breaks.size(); ++i) {
                     if (!(x.breaks[i] > x.breaks[i - 1])) {
                       throw std::invalid_argument("step density breaks must increase");
                     }
                   }
                 },
                 [](const component::Cantor& x) {
                   if (!(x.width > 0) || x.offset < 0 || x.offset + x.width > 1) {
                     throw std::invalid_argument("Cantor placement outside [0,1]");
                   }
                 },
                 [](const component::Example2& x) {
                   if (!x.data) throw std::invalid_argument("missing Example-2 data");
                 },
             },
             c);
}

std::vector<Component> normalize(std::vector<Component> parts) {
  std::vector<Component> out;
  for (auto& c : parts) {
    validate(c);
    bool merged = false;
    for (auto& acc : out) {
      if (try_merge(acc, c)) {
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(c));
  }
  std::erase_if(out, is_zero);
  for (auto& c : out) {
    if (auto* a = std::get_if<component::Atom>(&c)) {
      a->position = a->position.wrapped();
      a->pos = a->position.to_double();
    }
  }
  return out;
}

}  // namespace

double component_cdf(const Component& c, double t) {
  t = clamp01(t);
  return std::visit(
      overloaded{
          [t](const component::Lebesgue& x) { return x.scale * t; },
          [t](const component::Atom& x) { return x.pos < t ? x.mass : 0.0; },
          [t](const component::Trig& x) {
            double s = 0;
            for (std::size_t i = 0; i < x.a.size(); ++i) {
              const double n = static_cast<double>(i + 1);
              const double w = 2 * std::numbers::pi * n;
              s += x.a[i] * std::sin(w * t) / w + x.b[i] * (1 - std::cos(w * t)) / w;
            }
            return s;
          },
          [t](const component::Step& x) {
            double s = 0;
            for (std::size_t i = 0; i < x.values.size(); ++i) {
              if (t <= x.breaks[i]) break;
              s += x.values[i] * (std::min(t, x.breaks[i + 1]) - x.breaks[i]);
            }
            return s;
          },
          [t](const component::Cantor& x) {
            if (t <= x.offset) return 0.0;
            if (t >= x.offset + x.width) return x.coef;
            return x.coef * x.spec.cdf((t - x.offset) / x.width, x.stages);
          },
          [t](const component::Example2& x) {
            const auto& d = *x.data;
            if (t >= 1.0) return 0.0;
            auto it = std::upper_bound(d.start.begin(), d.start.end(), t);
            const auto k = static_cast<std::size_t>(it - d.start.begin()) - 1;
            if (k >= d.u.size()) return 0.0;
            const double xr = std::min(1.0, (t - d.start[k]) / d.u[k]);
            return x.scale * d.v[k] * (xr - d.base.cdf(xr));
          },
      },
      c);
}

double component_total(const Component& c) {
  return std::visit(overloaded{
                        [](const component::Lebesgue& x) { return x.scale; },
                        [](const component::Atom& x) { return x.mass; },
                        [](const component::Trig&) { return 0.0; },
                        [](const component::Step& x) {
                          double s = 0;
                          for (std::size_t i = 0; i < x.values.size(); ++i) {
                            s += x.values[i] * (x.breaks[i + 1] - x.breaks[i]);
                          }
                          return s;
                        },
                        [](const component::Cantor& x) { return x.coef; },
                        [](const component::Example2&) { return 0.0; },
                    },
                    c);
}

Premeasure::Premeasure(std::vector<Component> parts, std::string id)
    : parts_(normalize(std::move(parts))), id_(std::move(id)) {
  double scale = 1.0;
  total_ = 0.0;
  for (const auto& c : parts_) {
    total_ += component_total(c);
    scale = std::max(scale, magnitude(c));
    if (const auto* a = std::get_if<component::Atom>(&c)) atoms_.emplace_back(a->pos, a->mass);
  }
  std::sort(atoms_.begin(), atoms_.end());
  // Atoms at distinct Turns can share a double position.
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : atoms_) {
    if (!merged.empty() && merged.back().first == a.first) {
      merged.back().second += a.second;
    } else {
      merged.push_back(a);
    }
  }
  atoms_ = std::move(merged);
  balanced_ = std::abs(total_) <= kBalanceTolerance * scale;
  if (balanced_) total_ = 0.0;
  if (id_.empty()) id_ = parts_.empty() ? "zero" : "custom";
}

Premeasure Premeasure::make(std::vector<Component> parts, std::string id) {
  Premeasure p(std::move(parts), std::move(id));
  if (!p.balanced_) {
    std::ostringstream os;
    os.precision(17);
    os << "premeasure must have mu(T) = 0, got " << p.total_;
    throw std::invalid_argument(os.str());
  }
  return p;
}

Premeasure Premeasure::raw(std::vector<Component> parts, std::string id) {
  return Premeasure(std::move(parts), std::move(id));
}

Premeasure Premeasure::zero() { return Premeasure({}, "zero"); }

double Premeasure::mu_hat(double t) const {
  if (t <= 0) return 0.0;
  if (t >= 1) return total_;
  double s = 0.0;
  for (const auto& c : parts_) s += component_cdf(c, t);
  return s;
}

double Premeasure::mu_hat(const Turn& t) const { return mu_hat(t.to_double()); }

double Premeasure::jump(double a) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), std::make_pair(a, -std::numeric_limits<double>::infinity()));
  return it != atoms_.end() && it->first == a ? it->second : 0.0;
}

double Premeasure::eval_half_open(double a, double len) const {
  if (len <= 0) return 0.0;
  if (len >= 1) return total_;
  const double end = a + len;
  if (end <= 1.0) return mu_hat(end) - mu_hat(a);
  return total_ - mu_hat(a) + mu_hat(end - 1.0);
}

double Premeasure::eval(const Arc& arc) const {
  switch (arc.kind()) {
    case ArcKind::Empty:
      return 0.0;
    case ArcKind::Full:
      return total_;
    case ArcKind::Point:
      return jump(arc.start().to_double());
    default:
      break;
  }
  const double a = arc.start().to_double();
  const Rational end_exact = arc.start().value() + arc.exact_length();
  const double e = static_cast<double>(end_exact > 1 ? end_exact - 1 : end_exact);
  double v;
  if (arc.exact_length() == 1) {
    v = total_;
  } else if (end_exact <= 1) {
    v = mu_hat(static_cast<double>(end_exact)) - mu_hat(a);
  } else {
    v = total_ - mu_hat(a) + mu_hat(e);
  }
  const double end_point = e >= 1.0 ? 0.0 : e;
  if (!arc.includes_start()) v -= jump(a);
  if (arc.includes_end()) v += jump(end_point);
  return v;
}

Premeasure Premeasure::scaled(double c) const {
  std::vector<Component> parts = parts_;
  for (auto& p : parts) scale_component(p, c);
  std::ostringstream os;
  os.precision(17);
  os << c << '*' << '(' << id_ << ')';
  Premeasure out(std::move(parts), os.str());
  return out;
}

Premeasure combine(double a, const Premeasure& mu1, double b, const Premeasure& mu2) {
  std::vector<Component> parts;
  for (auto c : mu1.components()) {
    scale_component(c, a);
    parts.push_back(std::move(c));
  }
  for (auto c : mu2.components()) {
    scale_component(c, b);
    parts.push_back(std::move(c));
  }
  std::ostringstream os;
  os.precision(17);
  os << a << "*(" << mu1.id() << ") + " << b << "*(" << mu2.id() << ')';
  if (mu1.balanced() && mu2.balanced()) return Premeasure::make(std::move(parts), os.str());
  return Premeasure::raw(std::move(parts), os.str());
}

std::vector<double> mu_hat_grid(const Premeasure& mu, int depth) {
  if (depth < 0 || depth > 26) throw std::invalid_argument("grid depth outside [0,26]");
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> G(n + 1);
  G[0] = 0.0;
#pragma omp parallel for schedule(static)
  for (std::size_t j = 1; j < n; ++j) G[j] = mu.mu_hat(std::ldexp(static_cast<double>(j), -depth));
  G[n] = mu.total();
  return G;
}

NormEstimate norm_plus(const Premeasure& mu, const Majorant& lambda, int depth) {
  if (depth < 1 || depth > 13) throw std::invalid_argument("norm search depth outside [1,13]");
  NormEstimate est;
  est.search_depth = depth;
  const std::size_t n = std::size_t{1} << depth;
  const std::vector<double> G = mu_hat_grid(mu, depth);
  std::vector<double> w(n + 1, 1.0);
  for (std::size_t L = 1; L <= n; ++L) {
    const double t = std::ldexp(static_cast<double>(L), -depth);
    w[L] = t * lambda(t);
  }
  const kernels::ArcMax best = kernels::dyadic_ratio_max_parallel(G, w);
  est.lower_bound = best.value;
  est.attained_length = std::ldexp(static_cast<double>(best.length), -depth);

  for (const auto& [pos, mass] : mu.atoms()) {
    (void)mass;
    for (std::size_t L = 1; L <= n; ++L) {
      const double len = std::ldexp(static_cast<double>(L), -depth);
      double before = pos - len;
      if (before < 0) before += 1.0;
      double after = pos + len;
      if (after >= 1) after -= 1.0;
      const double right = mu.eval_half_open(pos, len);  // [pos, pos+len)
      const double left = mu.eval_half_open(before, len);  // [pos-len, pos)
      const double candidates[] = {
          right,                                          // [a, a+L)
          right - mu.jump(pos),                           // (a, a+L)
          left - mu.jump(before),                         // (a-L, a)
          left - mu.jump(before) + mu.jump(pos),          // (a-L, a]
          right - mu.jump(pos) + (len < 1 ? mu.jump(after) : 0.0),  // (a, a+L]
      };
      for (double v : candidates) {
        const double r = v / w[L];
        if (r > est.lower_bound) {
          est.lower_bound = r;
          est.attained_length = len;
        }
      }
    }
  }
  est.certified_upper = certified_norm_upper(mu, lambda);
  return est;
}

std::optional<double> certified_norm_upper(const Premeasure& mu, const Majorant& lambda) {
  if (!mu.balanced()) return std::nullopt;
  const double lam1 = lambda(1.0);
  double bound = 0.0;
  for (const auto& c : mu.components()) {
    std::optional<double> part = std::visit(
        overloaded{
            [&](const component::Lebesgue& x) -> std::optional<double> {
              return std::max(x.scale, 0.0) / lam1;
            },
            [&](const component::Atom& x) -> std::optional<double> {
              if (x.mass > 0) return std::nullopt;
              return 0.0;
            },
            [&](const component::Trig& x) -> std::optional<double> {
              double s = 0;
              for (double v : x.a) s += std::abs(v);
              for (double v : x.b) s += std::abs(v);
              return s / lam1;
            },
            [&](const component::Step& x) -> std::optional<double> {
              double m = 0;
              for (double v : x.values) m = std::max(m, v);
              return m / lam1;
            },
            [&](const component::Cantor& x) -> std::optional<double> {
              if (x.coef > 0) return std::nullopt;
              return 0.0;
            },
            [&](const component::Example2& x) -> std::optional<double> {
              if (x.scale < 0) return std::nullopt;
              double m = 0;
              for (std::size_t k = 0; k < x.data->u.size(); ++k) {
                m = std::max(m, (x.data->v[k] / x.data->u[k]) / lambda(x.data->u[k]));
              }
              return 2.0 * x.scale * m;
            },
        },
        c);
    if (!part) return std::nullopt;
    bound += *part;
  }
  return bound;
}

WeakConvergenceReport weak_convergence_check(const std::vector<Premeasure>& seq,
                                             const Premeasure& mu, const Majorant& lambda,
                                             const std::vector<Turn>& theta_samples, int depth) {
  WeakConvergenceReport r;
  for (const auto& mn : seq) {
    const double nl = norm_plus(mn, lambda, depth).lower_bound;
    r.norm_lower.push_back(nl);
    r.sup_norm_lower = std::max(r.sup_norm_lower, nl);
    std::vector<double> d;
    double mx = 0;
    for (const auto& th : theta_samples) {
      const double v = std::abs(mn.mu_hat(th) - mu.mu_hat(th));
      d.push_back(v);
      mx = std::max(mx, v);
    }
    r.diff.push_back(std::move(d));
    r.max_diff.push_back(mx);
  }
  r.diffs_non_increasing = std::is_sorted(r.max_diff.rbegin(), r.max_diff.rend());
  return r;
}

}  // namespace korenblum
