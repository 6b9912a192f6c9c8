#include "korenblum/singular.hpp"

#include "korenblum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace korenblum {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(SingularMethod m) {
  return m == SingularMethod::Series ? "series" : "delta-limit";
}

std::optional<double> entry_mass(const Premeasure& mu, const CarlesonSet& F, const GapEntry& e) {
  if (e.arc) return mu.eval(*e.arc);
  const double gap_total = e.total_length();
  const double lo = F.offset();
  const double hi = F.offset() + F.width();
  double sum = 0.0;
  for (const auto& c : mu.components()) {
    const std::optional<double> part = std::visit(
        overloaded{
            [&](const component::Lebesgue& x) -> std::optional<double> { return x.scale * gap_total; },
            [&](const component::Atom& x) -> std::optional<double> {
              if (x.pos < lo || x.pos > hi) return 0.0;
              return std::nullopt;
            },
            [&](const component::Trig&) -> std::optional<double> { return std::nullopt; },
            [&](const component::Step& x) -> std::optional<double> {
              // Constant density over the whole placement block.
              for (std::size_t i = 0; i < x.values.size(); ++i) {
                if (x.breaks[i] <= lo && hi <= x.breaks[i + 1]) return x.values[i] * gap_total;
              }
              return std::nullopt;
            },
            [&](const component::Cantor& x) -> std::optional<double> {
              if (x.offset >= hi || x.offset + x.width <= lo) return 0.0;
              if (x.spec.id() == F.cantor()->id() && x.offset == lo && x.width == F.width() &&
                  x.stages == 0) {
                return 0.0;
              }
              return std::nullopt;
            },
            [&](const component::Example2& x) -> std::optional<double> {
              const auto& d = *x.data;
              if (d.base.id() != F.cantor()->id()) return std::nullopt;
              for (std::size_t k = 0; k < d.u.size(); ++k) {
                if (d.start[k] == lo && d.u[k] == F.width()) {
                  // (v/u) m on the gaps; the Cantor copy puts no mass there.
                  return x.scale * d.v[k] / d.u[k] * gap_total;
                }
              }
              return std::nullopt;
            },
        },
        c);
    if (!part) return std::nullopt;
    sum += *part;
  }
  return sum;
}

SingularPartResult singular_part_series(const Premeasure& mu, const CarlesonSet& F, int n_terms,
                                        const Majorant* lambda, std::optional<double> norm) {
  if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
  SingularPartResult r;
  r.method = SingularMethod::Series;
  const auto& entries = F.gap_entries();
  const std::size_t used = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(n_terms));
  double s = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const auto m = entry_mass(mu, F, entries[i]);
    if (!m) {
      throw NumericError("premeasure '" + mu.id() + "' cannot be summed over the gaps of " + F.id());
    }
    s += *m;
  }
  r.value = -s;
  r.terms_used = static_cast<int>(used);
  if (lambda && norm) {
    const auto ent = entropy(F, *lambda, static_cast<int>(std::max<std::size_t>(used, 1)));
    if (ent.tail_bound) r.tail_bound = std::max(0.0, *norm) * *ent.tail_bound;
  }
  return r;
}

SingularPartResult singular_part_delta(const Premeasure& mu, const CarlesonSet& F,
                                       const std::vector<double>& delta_schedule) {
  if (delta_schedule.empty()) throw std::invalid_argument("empty delta schedule");
  for (std::size_t i = 1; i < delta_schedule.size(); ++i) {
    if (!(delta_schedule[i] < delta_schedule[i - 1])) {
      throw std::invalid_argument("delta schedule must decrease");
    }
  }
  SingularPartResult r;
  r.method = SingularMethod::DeltaLimit;
  for (double d : delta_schedule) {
    double v = 0.0;
    for (const auto& arc : neighborhood(F, d)) v += mu.eval(arc);
    r.delta_trace.emplace_back(d, v);
  }
  r.value = r.delta_trace.back().second;
  r.terms_used = static_cast<int>(r.delta_trace.size());
  double prev = INFINITY;
  for (const auto& [d, v] : r.delta_trace) {
    const double gap = std::abs(v - r.value);
    if (gap > prev + 1e-15) r.trace_monotone = false;
    prev = gap;
  }
  return r;
}

NonpositivityReport nonpositivity_check(const Premeasure& mu, const CarlesonSet& F,
                                        const Majorant& lambda, int n_terms, int norm_depth) {
  NonpositivityReport r;
  const NormEstimate est = norm_plus(mu, lambda, norm_depth);
  r.norm_certified = est.certified_upper.has_value();
  r.norm = r.norm_certified ? *est.certified_upper : est.lower_bound;
  r.series = singular_part_series(mu, F, n_terms, &lambda, r.norm);
  const auto ent = entropy(F, lambda, n_terms);
  r.entropy = ent.partial_sum;
  r.sign_ok = r.series.value <= r.tolerance;
  r.entropy_bound_ok = std::abs(r.series.value) <= r.norm * r.entropy + r.tolerance;
  return r;
}

}  // namespace korenblum
