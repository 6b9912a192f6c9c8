#include "reproduce.hpp"

#include "korenblum/cantor.hpp"
#include "korenblum/spec_parse.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

namespace korenblum::cli {

namespace {

std::string path_in(const ReproduceConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<double> example1_alphas(double alpha0) {
  std::set<double> s{alpha0 / 2, alpha0, (1 + alpha0) / 2};
  for (double a : {alpha0 - 0.1, alpha0 + 0.1}) {
    if (a > 0 && a < 1) s.insert(a);
  }
  return {s.begin(), s.end()};
}

ReproduceResult run_example1(const ReproduceConfig& cfg, const ordered_json& config) {
  const auto ex = example1_build(cfg.alpha0);
  const int stages = 60;

  std::vector<Row> census;
  for (const auto& c : cantor_census(ex.spec, stages)) {
    census.push_back({std::to_string(c.k), big(c.m), big(c.M), big(c.gap_count_log2), big(c.gap_len_log2),
                      num(c.gap_measure)});
  }
  write_file(path_in(cfg, "census.csv"),
             csv_text(config, {"cantor " + ex.spec.id()},
                      {"k", "m_k", "M_k", "gap_count_log2", "gap_len_log2", "gap_measure"}, census));

  std::vector<Row> terms, flags;
  for (double a : example1_alphas(cfg.alpha0)) {
    const auto s = cantor_entropy_series(ex.spec, Majorant::log_power(a), stages);
    for (const auto& r : s.rows) terms.push_back({num(a), std::to_string(r.k), num(r.term), num(r.partial_sum)});
    flags.push_back({num(a), s.converges ? "1" : "0", s.diverges ? "1" : "0", num(s.envelope), num(s.last_ratio)});
  }
  write_file(path_in(cfg, "entropy.csv"), csv_text(config, {}, {"alpha", "k", "term", "partial_sum"}, terms));
  write_file(path_in(cfg, "entropy_flags.csv"),
             csv_text(config, {}, {"alpha", "converges", "diverges", "envelope", "last_ratio"}, flags));

  const double a_hi = (1 + cfg.alpha0) / 2;
  const auto om = cantor_omega_bound(ex.spec, Majorant::log_power(a_hi));
  std::vector<Row> omega;
  for (const auto& r : om.rows) omega.push_back({num(r.t), num(r.omega), num(r.ratio)});
  write_file(path_in(cfg, "omega.csv"),
             csv_text(config, {"alpha=" + num(a_hi), "bounded=" + std::string(om.bounded ? "1" : "0")},
                      {"t", "omega", "ratio"}, omega));

  const auto sw = alpha_sweep(ex.mu, {cfg.alpha0 / 2, cfg.alpha0, a_hi});
  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["target"] = "example1";
  summary["config"] = config;
  summary["cantor"] = ex.spec.id();
  summary["omega_bounded"] = om.bounded;
  summary["omega_max_ratio"] = om.max_ratio;
  summary["sweep"] = to_json(sw);
  ordered_json table = ordered_json::array();
  for (const auto& r : sw.reports) table.push_back({{"alpha", *r.alpha}, {"verdict", to_string(r.verdict)}});
  summary["dichotomy"] = table;
  write_file(path_in(cfg, "summary.json"), summary.dump(2) + "\n");

  std::string line = "example1 alpha0=" + num(cfg.alpha0) + ":";
  for (const auto& r : sw.reports) line += " " + num(*r.alpha) + "->" + to_string(r.verdict);
  line += sw.single_flip ? " (single flip)" : " (no single flip)";
  return {0, line};
}

ReproduceResult run_example2(const ReproduceConfig& cfg, const ordered_json& config) {
  const auto b = example2_build({cfg.alpha0, cfg.K, {}});
  const auto& d = *b.data;
  std::vector<Row> rows;
  double pv = 0, max_block = 0;
  bool increasing = true;
  for (int k = 0; k < d.K; ++k) {
    const double before = pv;
    pv += d.v[k];
    if (!(pv > before)) increasing = false;
    const double block = b.mu.mu_hat(d.start[k + 1]) - b.mu.mu_hat(d.start[k]);
    max_block = std::max(max_block, std::abs(block));
    rows.push_back({std::to_string(k + 1), num(d.u[k]), num(d.v[k]), num(d.start[k]), num(pv), num(block)});
  }
  write_file(path_in(cfg, "blocks.csv"),
             csv_text(config, {}, {"k", "u_k", "v_k", "start", "partial_v", "block_integral"}, rows));

  const int window = std::min(1024, d.K);
  double last = 0;
  for (int k = d.K - window; k < d.K; ++k) last += d.v[k];

  // Boundedness spot check and verdicts on a desk-size truncation.
  const int K_small = std::min(64, d.K);
  const auto small = example2_build({cfg.alpha0, K_small, {}});
  ordered_json bounded = ordered_json::array();
  const double a_hi = (1 + cfg.alpha0) / 2;
  for (double a : {cfg.alpha0 / 2, cfg.alpha0, a_hi}) {
    const auto lam = Majorant::log_power(a);
    const auto n = norm_plus(small.mu, lam, 10);
    bounded.push_back({{"alpha", a}, {"norm_lower", n.lower_bound},
                       {"certified_upper", certified_norm_upper(small.mu, lam).value_or(NAN)}});
  }
  const auto sw = alpha_sweep(small.mu, {cfg.alpha0 / 2, cfg.alpha0, a_hi});

  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["target"] = "example2";
  summary["config"] = config;
  summary["K"] = d.K;
  summary["normalizer"] = d.normalizer;
  summary["deficit"] = d.deficit;
  summary["untruncated_tail"] = d.untruncated_tail;
  summary["v_growth_floor"] = b.v_growth_floor;
  summary["v_partial_sum"] = pv;
  summary["v_partial_increasing"] = increasing;
  summary["v_window"] = window;
  summary["v_window_sum"] = last;
  summary["max_abs_block_integral"] = max_block;
  summary["verdict_K"] = K_small;
  summary["lambda_bounded"] = bounded;
  summary["sweep"] = to_json(sw);
  write_file(path_in(cfg, "summary.json"), summary.dump(2) + "\n");

  std::string line = "example2 K=" + std::to_string(d.K) + " deficit=" + num(d.deficit) +
                     " last-window v sum=" + num(last) + ";";
  for (const auto& r : sw.reports) line += " " + num(*r.alpha) + "->" + to_string(r.verdict);
  return {0, line};
}

ReproduceResult run_poisson_bound(const ReproduceConfig& cfg, const ordered_json& config) {
  const auto lam = parse_majorant(cfg.majorant);
  const std::vector<std::pair<std::string, std::string>> families = {
      {"atom", "atom:0,1"},
      {"cantor-linear", "cantor:mk=k"},
      {"example1", "cantor:ex1,alpha0=" + num(cfg.alpha0)},
      {"example2", "example2:alpha0=" + num(cfg.alpha0) + ",K=64"},
      {"trig", "trig:c1=0.5,s2=0.25"},
      {"step", "step:breaks=0;0.25;0.5;1,values=1;-1;0"},
  };
  const std::vector<double> radii{0.9, 0.99, 0.999};
  const int angles = 256;
  std::vector<Row> grid, table;
  double overall = -INFINITY;
  for (const auto& [name, spec] : families) {
    const auto mu = parse_premeasure(spec);
    NormEstimate n = norm_plus(mu, lam, 10);
    n.certified_upper = certified_norm_upper(mu, lam);
    if (!n.certified_upper) continue;
    const auto rep = growth_bound_check(PoissonField(mu), lam, n, radii, angles);
    for (double r : radii) {
      double m = -INFINITY;
      for (const auto& row : rep.rows) {
        if (row.r == r) m = std::max(m, row.ratio);
      }
      table.push_back({name, spec, num(*n.certified_upper), num(r), num(m)});
    }
    for (const auto& row : rep.rows) grid.push_back({name, num(row.r), num(row.theta), num(row.value), num(row.ratio)});
    overall = std::max(overall, rep.max_ratio);
  }
  write_file(path_in(cfg, "bound_table.csv"),
             csv_text(config, {"majorant " + lam.id()}, {"family", "spec", "norm", "r", "max_ratio"}, table));
  write_file(path_in(cfg, "grid.csv"), csv_text(config, {}, {"family", "r", "theta", "value", "ratio"}, grid));
  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["target"] = "poisson-bound";
  summary["config"] = config;
  summary["constant"] = kPoissonBoundConstant;
  summary["max_ratio"] = overall;
  summary["passed"] = overall <= kPoissonBoundConstant;
  write_file(path_in(cfg, "summary.json"), summary.dump(2) + "\n");
  return {0, "poisson-bound max ratio " + num(overall) + (overall <= kPoissonBoundConstant ? " <= 10" : " > 10")};
}

ReproduceResult run_feasibility_oracle(const ReproduceConfig& cfg, const ordered_json& config) {
  std::vector<Row> log;
  ordered_json per_n = ordered_json::array();
  int disagreements = 0;
  for (int N = 3; N <= 8; ++N) {
    const auto s = oracle_equivalence(N, cfg.trials, cfg.seed);
    for (const auto& t : s.log) {
      log.push_back({std::to_string(N), std::to_string(t.index), std::to_string(t.seed),
                     t.negcycle_feasible ? "1" : "0", t.bruteforce_feasible ? "1" : "0", num(t.min_covering_sum)});
    }
    disagreements += static_cast<int>(s.disagreements.size());
    per_n.push_back({{"N", N}, {"trials", s.trials}, {"agreements", s.agreements}, {"infeasible", s.infeasible}});
  }
  write_file(path_in(cfg, "oracle_log.csv"),
             csv_text(config, {}, {"N", "trial", "seed", "negcycle_feasible", "bruteforce_feasible", "min_covering_sum"},
                      log));
  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["target"] = "feasibility-oracle";
  summary["config"] = config;
  summary["per_N"] = per_n;
  summary["disagreements"] = disagreements;
  write_file(path_in(cfg, "summary.json"), summary.dump(2) + "\n");
  return {0, "feasibility-oracle " + std::to_string(log.size()) + " trials, " + std::to_string(disagreements) +
                 " disagreements"};
}

}  // namespace

ReproduceResult reproduce(const ReproduceConfig& cfg, const ordered_json& config) {
  if (std::find(std::begin(kReproduceTargets), std::end(kReproduceTargets), cfg.target) ==
      std::end(kReproduceTargets)) {
    throw std::invalid_argument("unknown reproduce target '" + cfg.target + "'");
  }
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.target == "example1") return run_example1(cfg, config);
  if (cfg.target == "example2") return run_example2(cfg, config);
  if (cfg.target == "poisson-bound") return run_poisson_bound(cfg, config);
  return run_feasibility_oracle(cfg, config);
}

}  // namespace korenblum::cli
