#include "korenblum/carleson.hpp"

#include "korenblum/errors.hpp"
#include "korenblum/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double big_to_double(const BigInt& v) { return static_cast<double>(v); }

GapEntry explicit_entry(const Arc& arc) {
  GapEntry e;
  e.log_scale = std::log(length(arc));
  e.arc = arc;
  return e;
}

void sort_entries(std::vector<GapEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const GapEntry& a, const GapEntry& b) {
    const double la = a.log_length(), lb = b.log_length();
    if (la != lb) return la > lb;
    if (a.arc && b.arc) return a.arc->start() < b.arc->start();
    return a.stage < b.stage;
  });
}

}  // namespace

double GapEntry::log_length() const { return big_to_double(len_log2) * kLn2 + log_scale; }

double GapEntry::log_total() const {
  // count_log2 + len_log2 is small for census stages even when both are huge.
  return big_to_double(count_log2 + len_log2) * kLn2 + log_scale;
}

double GapEntry::total_length() const { return std::exp(log_total()); }

CarlesonSet CarlesonSet::from_components(std::vector<Arc> closed) {
  if (closed.empty()) throw std::invalid_argument("empty closed set");
  for (const auto& a : closed) {
    if (a.kind() != ArcKind::Point && a.kind() != ArcKind::Closed) {
      throw std::invalid_argument("closed set components must be points or closed arcs");
    }
  }
  std::sort(closed.begin(), closed.end(),
            [](const Arc& a, const Arc& b) { return a.start() < b.start(); });
  for (std::size_t i = 0; i + 1 < closed.size(); ++i) {
    if (!(closed[i].end() < closed[i + 1].start())) {
      throw std::invalid_argument("closed set components must be disjoint");
    }
  }
  if (closed.size() > 1 && !(closed.back().end().value() < closed.front().start().value() + 1)) {
    throw std::invalid_argument("closed set components must be disjoint");
  }
  CarlesonSet F;
  F.components_ = std::move(closed);
  const std::size_t n = F.components_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Arc& cur = F.components_[i];
    const Arc& next = F.components_[(i + 1) % n];
    Rational gap_end = next.start().value();
    if (i + 1 == n) gap_end += 1;
    const Rational len = gap_end - cur.end().value();
    if (len > 0) F.entries_.push_back(explicit_entry(Arc::with_length(ArcKind::Open, cur.end(), len)));
  }
  sort_entries(F.entries_);
  std::ostringstream os;
  os << "explicit(" << n << " components)";
  F.id_ = os.str();
  return F;
}

CarlesonSet CarlesonSet::points(const std::vector<Turn>& at) {
  std::vector<Arc> pts;
  for (const auto& t : at) pts.push_back(Arc::point(t));
  std::sort(pts.begin(), pts.end(), [](const Arc& a, const Arc& b) { return a.start() < b.start(); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  CarlesonSet F = from_components(std::move(pts));
  F.id_ = "points(" + std::to_string(F.components_.size()) + ")";
  return F;
}

CarlesonSet CarlesonSet::cantor_stage(const CantorSpec& spec, int n) {
  CarlesonSet F = from_components(korenblum::cantor_stage(spec, n).kept);
  F.id_ = "cantor-stage:" + spec.id() + ",n=" + std::to_string(n);
  return F;
}

CarlesonSet CarlesonSet::cantor_limit(const CantorSpec& spec, double offset, double width,
                                      int stages) {
  if (!(width > 0 && width <= 1) || offset < 0 || offset >= 1) {
    throw std::invalid_argument("Cantor placement outside the circle");
  }
  if (stages < 1 || stages > CantorSpec::kStages) throw std::out_of_range("census stages out of range");
  CarlesonSet F;
  F.lazy_ = true;
  F.spec_ = spec;
  F.offset_ = offset;
  F.width_ = width;
  if (width < 1) {
    const Turn end = Turn::from_double(offset) + Turn::from_double(width);
    F.entries_.push_back(explicit_entry(Arc::make(ArcKind::Open, end, Turn::from_double(offset))));
  }
  for (const auto& c : cantor_census(spec, stages)) {
    GapEntry e;
    e.count_log2 = c.gap_count_log2;
    e.len_log2 = c.gap_len_log2;
    e.log_scale = std::log(width);
    e.stage = c.k;
    F.entries_.push_back(std::move(e));
  }
  sort_entries(F.entries_);
  std::ostringstream os;
  os.precision(17);
  os << "cantor:" << spec.id();
  if (width < 1) os << "@[" << offset << ',' << offset + width << ')';
  F.id_ = os.str();
  return F;
}

const std::vector<Arc>& CarlesonSet::components() const {
  if (lazy_) throw ResolutionError("lazy Cantor set has no explicit component list");
  return components_;
}

double CarlesonSet::complementary_length() const {
  double s = 0;
  for (const auto& e : entries_) s += e.total_length();
  return s;
}

EntropyResult entropy(const CarlesonSet& F, const Majorant& lambda, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
  EntropyResult r;
  const auto& entries = F.gap_entries();
  const std::size_t used = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(n_terms));
  auto term = [&](const GapEntry& e) { return e.total_length() * lambda.eval_log(-e.log_length()); };
  for (std::size_t i = 0; i < used; ++i) {
    r.terms.push_back(term(entries[i]));
    r.partial_sum += r.terms.back();
  }
  r.terms_used = static_cast<int>(used);
  if (!F.lazy()) {
    double tail = 0;
    for (std::size_t i = used; i < entries.size(); ++i) tail += term(entries[i]);
    r.tail_bound = tail;
    return r;
  }
  // Lazy census: remaining computed stages plus a k^-2 envelope beyond them,
  // only when the series passes the convergence test.
  const auto series = cantor_entropy_series(*F.cantor(), lambda, F.gap_entries().back().stage);
  if (series.converges) {
    double tail = 0;
    for (std::size_t i = used; i < entries.size(); ++i) tail += term(entries[i]);
    const int K = static_cast<int>(series.rows.size());
    tail += F.width() * series.envelope / K;
    r.tail_bound = tail;
  }
  return r;
}

EntropySeries cantor_entropy_series(const CantorSpec& spec, const Majorant& lambda, int n_max) {
  if (n_max < 1 || n_max > CantorSpec::kStages) throw std::out_of_range("n_max out of range");
  EntropySeries s;
  double partial = 0;
  for (int k = 1; k <= n_max; ++k) {
    EntropySeriesRow row;
    row.k = k;
    row.m = spec.m(k);
    row.M = spec.M(k);
    const double u = (static_cast<double>(k) + spec.M_double(k)) * kLn2;
    row.term = std::ldexp(lambda.eval_log(u), -k);
    partial += row.term;
    row.partial_sum = partial;
    s.rows.push_back(std::move(row));
  }
  const int k0 = (n_max + 1) / 2;
  s.envelope = static_cast<double>(k0) * k0 * s.rows[k0 - 1].term;
  s.converges = true;
  for (int k = k0; k <= n_max; ++k) {
    const double bound = s.envelope / (static_cast<double>(k) * k) * (1 + 1e-9);
    if (!(s.rows[k - 1].term <= bound)) s.converges = false;
  }
  if (n_max >= 2) s.last_ratio = s.rows[n_max - 1].term / s.rows[n_max - 2].term;
  s.diverges = n_max >= kDivergenceWindow && s.last_ratio > kDivergenceRatio;
  for (int k = n_max - kDivergenceWindow + 2; k <= n_max && s.diverges; ++k) {
    if (!(s.rows[k - 1].term > s.rows[k - 2].term)) s.diverges = false;
  }
  if (s.diverges) s.converges = false;
  return s;
}

std::vector<Arc> neighborhood(const CarlesonSet& F, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  const auto& comps = F.components();
  const double d = delta / (2 * std::numbers::pi);
  struct Iv {
    double lo, hi;
  };
  std::vector<Iv> iv;
  for (const auto& c : comps) {
    double lo = c.start().to_double() - d;
    double hi = c.start().to_double() + length(c) + d;
    if (hi - lo >= 1) return {Arc::full()};
    const double shift = std::floor(lo);
    iv.push_back({lo - shift, hi - shift});
  }
  std::sort(iv.begin(), iv.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
  std::vector<Iv> merged;
  for (const auto& x : iv) {
    if (!merged.empty() && x.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, x.hi);
    } else {
      merged.push_back(x);
    }
  }
  // Seam: the last interval may run past 1 into the first ones.
  while (merged.size() > 1 && merged.back().hi - 1 >= merged.front().lo) {
    merged.back().hi = std::max(merged.back().hi, merged.front().hi + 1);
    merged.erase(merged.begin());
  }
  if (merged.size() == 1 && merged[0].hi - merged[0].lo >= 1) return {Arc::full()};
  std::vector<Arc> out;
  for (const auto& x : merged) {
    const Rational lo = Turn::from_double(x.lo).value();
    const Rational hi = Turn::from_double(x.hi).value();
    out.push_back(Arc::with_length(ArcKind::Closed, Turn(lo), hi - lo));
  }
  return out;
}

double modulus_of_continuity(const Premeasure& mu, double t, int resolution) {
  if (!(t > 0 && t <= 1)) throw std::invalid_argument("t outside (0,1]");
  if (resolution < 1 || resolution > 26) throw std::invalid_argument("resolution outside [1,26]");
  const std::size_t n = std::size_t{1} << resolution;
  const double steps = std::ldexp(t, resolution);
  if (steps == std::floor(steps)) {
    const std::vector<double> G = mu_hat_grid(mu, resolution);
    return kernels::window_max_parallel(G, static_cast<std::size_t>(steps));
  }
  double best = -INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    best = std::max(best, mu.eval_half_open(std::ldexp(static_cast<double>(j), -resolution), t));
  }
  return best;
}

OmegaBoundReport cantor_omega_bound(const CantorSpec& spec, const Majorant& lambda, int min_log2,
                                    int resolution) {
  if (min_log2 < 1 || resolution < min_log2) throw std::invalid_argument("bad omega grid");
  OmegaBoundReport r;
  const Premeasure mu = Premeasure::raw({component::Cantor{spec, 1.0, 0.0, 1.0, 0}}, "cantor:" + spec.id());
  const std::vector<double> G = mu_hat_grid(mu, resolution);
  for (int j = 1; j <= min_log2; ++j) {
    OmegaRow row;
    row.t = std::ldexp(1.0, -j);
    row.omega = kernels::window_max_parallel(G, std::size_t{1} << (resolution - j));
    row.ratio = row.omega / (row.t * lambda(row.t));
    r.max_ratio = std::max(r.max_ratio, row.ratio);
    r.rows.push_back(row);
  }
  const int J = CarlesonSet::kDefaultCensusStages;
  double rmax = 0;
  for (int j = 1; j <= J; ++j) {
    const double u = (static_cast<double>(j) + spec.M_double(j)) * kLn2;
    const double Rj = std::exp(j * kLn2 - std::log(lambda.eval_log(u)));
    r.stage_ratio.push_back(Rj);
    rmax = std::max(rmax, Rj);
  }
  r.structural_bound = 4 * rmax;
  r.stage_ratio_decreasing = true;
  for (int j = J - kDivergenceWindow + 1; j < J; ++j) {
    if (!(r.stage_ratio[j] < r.stage_ratio[j - 1])) r.stage_ratio_decreasing = false;
  }
  r.bounded = r.stage_ratio_decreasing && r.max_ratio <= r.structural_bound;
  return r;
}

}  // namespace korenblum
