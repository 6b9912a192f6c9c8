#include "korenblum/cyclicity.hpp"

#include "korenblum/errors.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <type_traits>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double example2_weight(double n) {
  const double l = std::log(n);
  const double ll = std::log(l);
  return 1.0 / (n * l * ll * ll);
}

}  // namespace

Complex herglotz_integral(const Premeasure& mu, Complex z, const QuadratureOptions& opt) {
  check_radius(z);
  const double r = std::abs(z);
  const double phi = r > 0 ? std::arg(z) / (2 * kPi) : 0.0;
  std::function<Complex(double)> kernel = [z](double t) { return herglotz_kernel(z, t); };
  return integrate_against(mu, kernel, {phi < 0 ? phi + 1 : phi}, (1 - r) / (2 * kPi) + 1e-300,
                           scaled_options(opt, r));
}

Complex herglotz_eval(const Premeasure& mu, Complex z, const QuadratureOptions& opt) {
  return std::exp(herglotz_integral(mu, z, opt));
}

Complex singular_inner(const Premeasure& positive, Complex z, const QuadratureOptions& opt) {
  for (const auto& c : positive.components()) {
    const bool ok = std::visit(
        [](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, component::Atom>) return x.mass >= 0;
          if constexpr (std::is_same_v<T, component::Cantor>) return x.coef >= 0;
          return false;
        },
        c);
    if (!ok) throw std::invalid_argument("singular_inner needs a positive atomic or Cantor measure");
  }
  return std::exp(-herglotz_integral(positive, z, opt));
}

TaylorReport taylor_growth_check(const std::function<Complex(Complex)>& f, const Majorant& lambda,
                                 int n_max, double r) {
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  if (!(r > 0 && r < 1)) throw std::invalid_argument("radius must lie in (0,1)");
  const int L = 2 * n_max;
  std::vector<Complex> samples(L);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < L; ++j) {
    try {
      samples[j] = f(std::polar(r, 2 * kPi * j / L));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  TaylorReport rep;
  rep.n_max = n_max;
  rep.r = r;
  rep.coefficient_moduli.resize(n_max + 1);
  const double log_r = std::log(r);
  for (int n = 0; n <= n_max; ++n) {
    Complex s = 0;
    for (int j = 0; j < L; ++j) {
      // (j*n) mod L keeps the twiddle argument small.
      const long long idx = (static_cast<long long>(j) * n) % L;
      s += samples[j] * std::polar(1.0, -2 * kPi * static_cast<double>(idx) / L);
    }
    const double a = std::abs(s) / L * std::exp(-n * log_r);
    rep.coefficient_moduli[n] = a;
    if (n >= 2 && a > 0) {
      rep.C = std::max(rep.C, std::max(0.0, std::log(a)) / lambda(1.0 / n));
    }
  }
  return rep;
}

Example1 example1_build(double alpha0) {
  if (!(alpha0 > 0 && alpha0 < 1)) throw std::invalid_argument("alpha0 must lie in (0,1)");
  Example1 ex{CantorSpec::example1(alpha0), {}, {}};
  component::Cantor c;
  c.spec = ex.spec;
  c.coef = 1.0;
  ex.positive = Premeasure::raw({c}, "cantor:" + ex.spec.id());
  c.coef = -1.0;
  ex.mu = Premeasure::make({component::Lebesgue{1.0}, c}, "example1:alpha0=" + fmt(alpha0));
  return ex;
}

Example2Build example2_build(const Example2Spec& spec) {
  if (!(spec.alpha0 > 0 && spec.alpha0 < 1)) throw std::invalid_argument("alpha0 must lie in (0,1)");
  auto d = std::make_shared<Example2Data>();
  d->alpha0 = spec.alpha0;
  d->base = CantorSpec::example1(spec.alpha0);
  std::ostringstream id;
  id << "example2:alpha0=" << fmt(spec.alpha0);
  if (spec.u.empty()) {
    if (spec.K < 1) throw std::invalid_argument("K must be >= 1");
    d->K = spec.K;
    std::vector<double> g(spec.K);
    for (int k = 1; k <= spec.K; ++k) g[k - 1] = example2_weight(k + d->index_shift);
    // Sum smallest first.
    double z = 0;
    for (int k = spec.K; k >= 1; --k) z += g[k - 1];
    d->normalizer = z;
    d->u.resize(spec.K);
    for (int k = 0; k < spec.K; ++k) d->u[k] = g[k] / z;
    // Raw tail beyond n = K + shift, midpoint integral of g: 1/loglog(n).
    const double n_end = spec.K + d->index_shift + 0.5;
    d->untruncated_tail = (1.0 / std::log(std::log(n_end))) / z;
    id << ",K=" << spec.K;
  } else {
    d->K = static_cast<int>(spec.u.size());
    d->u = spec.u;
    for (std::size_t k = 0; k < d->u.size(); ++k) {
      if (!(d->u[k] > 0)) throw std::invalid_argument("u_k must be positive");
      if (k > 0 && !(d->u[k] < d->u[k - 1])) throw std::invalid_argument("u_k must be strictly decreasing");
    }
    d->normalizer = 1.0;
    id << ",u=list" << d->K;
  }
  d->start.assign(d->K + 1, 0.0);
  for (int k = 0; k < d->K; ++k) d->start[k + 1] = d->start[k] + d->u[k];
  double sum = 0;
  for (int k = d->K - 1; k >= 0; --k) sum += d->u[k];
  if (sum > 1 + 1e-12) throw std::invalid_argument("sum of u_k exceeds 1");
  d->deficit = std::abs(1.0 - sum);
  if (spec.u.empty()) {
    d->start[d->K] = 1.0;
    d->u[d->K - 1] = 1.0 - d->start[d->K - 1];
  } else {
    d->start[d->K] = std::min(1.0, d->start[d->K]);
  }
  d->v.resize(d->K);
  for (int k = 0; k < d->K; ++k) {
    d->v[k] = d->u[k] * std::log(std::log(1.0 / d->u[k]));
    if (!(d->v[k] > 0)) {
      throw std::invalid_argument("v_k = u_k log log(1/u_k) must be positive (needs u_k < 1/e; increase K)");
    }
  }

  Example2Build out;
  out.v_growth_floor = std::numeric_limits<double>::infinity();
  for (int k = 0; k < d->K; ++k) {
    const double n = k + 1 + d->index_shift;
    out.v_growth_floor = std::min(out.v_growth_floor, d->v[k] * n * std::log(n) * std::log(std::log(n)));
  }
  out.data = d;
  out.mu = Premeasure::make({component::Example2{d, 1.0}}, id.str());
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Cyclic:
      return "cyclic";
    case Verdict::NotCyclic:
      return "not-cyclic";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct CantorEvidence {
  EntropySeries series;
  std::optional<OmegaBoundReport> omega;
};

CantorEvidence cantor_evidence(const CantorSpec& spec, const Majorant& lambda, const VerdictConfig& cfg) {
  CantorEvidence ev{cantor_entropy_series(spec, lambda, cfg.entropy_stages), std::nullopt};
  if (ev.series.diverges) {
    ev.omega = cantor_omega_bound(spec, lambda, cfg.omega_min_log2, cfg.omega_resolution);
  }
  return ev;
}

SingularCandidate run_candidate(const Premeasure& mu, const CarlesonSet& F, const Majorant& lambda,
                                std::optional<double> norm, std::string source) {
  SingularCandidate c;
  c.set_id = F.id();
  c.source = std::move(source);
  c.carleson_certified = true;
  const int n = static_cast<int>(F.gap_entries().size());
  c.entropy = entropy(F, lambda, n).partial_sum;
  try {
    c.result = singular_part_series(mu, F, n, &lambda, norm);
  } catch (const NumericError& e) {
    c.note = e.what();
  }
  return c;
}

}  // namespace

VerdictReport verdict(const Premeasure& mu, const Majorant& lambda, const VerdictConfig& cfg) {
  VerdictReport rep;
  rep.majorant_id = lambda.id();
  rep.mu_id = mu.id();
  rep.growth = classify_growth(lambda, default_c_samples(), default_tail_log_grid());
  if (rep.growth.tag == GrowthTag::Neither) {
    rep.notes.push_back("majorant satisfies neither growth condition C1 nor C2");
    return rep;
  }
  if (!mu.balanced()) {
    rep.notes.push_back("premeasure is not balanced");
    return rep;
  }

  const auto certified = certified_norm_upper(mu, lambda);
  std::optional<double> norm = certified;
  if (!norm) norm = norm_plus(mu, lambda, cfg.norm_depth).lower_bound;

  // Candidates where mu_s can be negative, and per-component cyclic evidence.
  bool all_supported = true;
  for (const auto& comp : mu.components()) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, component::Lebesgue> || std::is_same_v<T, component::Trig> ||
                        std::is_same_v<T, component::Step>) {
            rep.analytic_evidence.push_back("density component: no singular part");
          } else if constexpr (std::is_same_v<T, component::Atom>) {
            if (x.mass < 0) {
              rep.candidates.push_back(run_candidate(mu, CarlesonSet::points({x.position}), lambda, norm,
                                                     "negative atom"));
            } else {
              rep.notes.push_back("positive atom: premeasure not Lambda-bounded");
            }
            all_supported = false;
          } else if constexpr (std::is_same_v<T, component::Cantor>) {
            if (x.stages > 0) {
              rep.analytic_evidence.push_back("stage-truncated Cantor component: absolutely continuous");
              return;
            }
            if (x.coef > 0) {
              rep.notes.push_back("positive Cantor component: premeasure not Lambda-bounded");
              all_supported = false;
              return;
            }
            const auto ev = cantor_evidence(x.spec, lambda, cfg);
            if (ev.series.converges) {
              rep.candidates.push_back(run_candidate(
                  mu, CarlesonSet::cantor_limit(x.spec, x.offset, x.width, cfg.entropy_stages), lambda,
                  norm, "Cantor component with convergent entropy series"));
              all_supported = false;
            } else if (ev.series.diverges && ev.omega && ev.omega->bounded) {
              rep.analytic_evidence.push_back(
                  "Cantor component with omega(t) <= C t Lambda(t): charges no Lambda-Carleson set");
              rep.computational_evidence.push_back("entropy series diverges, last term ratio " +
                                                   fmt(ev.series.last_ratio));
              rep.computational_evidence.push_back("omega ratio bounded, max " + fmt(ev.omega->max_ratio));
            } else {
              rep.notes.push_back("Cantor component: entropy series neither certified convergent nor bounded omega");
              all_supported = false;
            }
          } else if constexpr (std::is_same_v<T, component::Example2>) {
            rep.truncated_construction = true;
            const auto& d = *x.data;
            if (x.scale < 0) {
              rep.notes.push_back("negated Example-2 construction: premeasure not Lambda-bounded");
              all_supported = false;
              return;
            }
            const auto ev = cantor_evidence(d.base, lambda, cfg);
            if (ev.series.converges) {
              auto c = run_candidate(mu, CarlesonSet::cantor_limit(d.base, d.start[0], d.u[0], cfg.entropy_stages),
                                     lambda, norm, "Example-2 block 1 Cantor copy (truncated construction)");
              rep.candidates.push_back(std::move(c));
              all_supported = false;
            } else if (ev.series.diverges && ev.omega && ev.omega->bounded) {
              rep.analytic_evidence.push_back(
                  "Example-2 Cantor copies with omega(t) <= C t Lambda(t): charge no Lambda-Carleson set");
              rep.computational_evidence.push_back("base entropy series diverges, last term ratio " +
                                                   fmt(ev.series.last_ratio));
              rep.computational_evidence.push_back("base omega ratio bounded, max " + fmt(ev.omega->max_ratio));
            } else {
              rep.notes.push_back("Example-2 base: entropy series neither certified convergent nor bounded omega");
              all_supported = false;
            }
          }
        },
        comp);
  }
  if (mu.components().empty()) rep.analytic_evidence.push_back("zero premeasure");

  for (const auto& c : rep.candidates) {
    if (c.carleson_certified && c.result && c.result->value < -cfg.tolerance) {
      rep.verdict = Verdict::NotCyclic;
      rep.grade = "computational";
      return rep;
    }
  }
  if (!all_supported) {
    rep.notes.push_back("no certified negative singular part and no complete cyclic evidence");
    return rep;
  }
  if (!cfg.run_probe) {
    rep.notes.push_back("probe disabled");
    return rep;
  }
  const double C = default_probe_C(mu, lambda, cfg.norm_depth);
  rep.probe = abs_continuity_probe(mu, lambda, C, default_probe_schedule(cfg.probe_max_log2N));
  if (rep.probe->obstruction) {
    rep.notes.push_back("probe found an obstruction despite family evidence");
    return rep;
  }
  rep.computational_evidence.push_back("probe: no obstruction up to N = 2^" +
                                       std::to_string(cfg.probe_max_log2N));
  rep.verdict = Verdict::Cyclic;
  rep.grade = rep.analytic_evidence.empty() ? "computational" : "analytic+computational";
  return rep;
}

SweepReport alpha_sweep(const Premeasure& mu, const std::vector<double>& alphas, const VerdictConfig& cfg) {
  SweepReport sw;
  for (double a : alphas) {
    auto r = verdict(mu, Majorant::log_power(a), cfg);
    r.alpha = a;
    sw.reports.push_back(std::move(r));
  }
  for (std::size_t i = 1; i < sw.reports.size(); ++i) {
    if (sw.reports[i].verdict != sw.reports[i - 1].verdict) ++sw.flips;
  }
  sw.single_flip = sw.flips == 1 && sw.reports.front().verdict == Verdict::NotCyclic &&
                   sw.reports.back().verdict == Verdict::Cyclic;
  return sw;
}

}  // namespace korenblum
