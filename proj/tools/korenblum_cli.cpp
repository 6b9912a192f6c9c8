#include "report_json.hpp"
#include "reproduce.hpp"

#include "korenblum/errors.hpp"
#include "korenblum/spec_parse.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace korenblum;
using namespace korenblum::cli;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { kOk = 0, kParse = 1, kNumeric = 2, kObstruction = 3 };

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_real(const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw korenblum::ParseError("not a number: '" + s + "'");
  return v;
}

std::vector<double> real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(item));
  if (out.empty()) throw korenblum::ParseError("empty list");
  return out;
}

Complex to_complex(const std::string& s) {
  const auto v = real_list(s);
  if (v.size() != 2) throw korenblum::ParseError("z must be <re>,<im>");
  return {v[0], v[1]};
}

/// Shared state of one invocation.
struct Run {
  std::string command;
  std::string format;
  std::string output;
  ordered_json config;
  std::string summary;
  int exit_code = kOk;

  void emit(const std::string& text) const {
    if (output.empty() || output == "-") {
      std::cout << text;
    } else {
      write_file(output, text);
    }
  }
  void emit_json(ordered_json result) const {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["result"] = std::move(result);
    emit(j.dump(2) + "\n");
  }
  void emit_csv(const std::vector<std::string>& comments, const Row& header, const std::vector<Row>& rows) const {
    emit(csv_text(config, comments, header, rows));
  }
};

// ---- options ------------------------------------------------------------

struct Opts {
  std::string majorant = "logpow:p=0.5,c=2";
  std::string mu;
  std::string set;
  std::string cantor;
  std::vector<std::string> arcs;
  std::vector<std::string> thetas;
  std::vector<std::string> zs;
  std::string eps, M, N;
  std::string delta = "dyadic";
  std::string alpha_sweep;
  std::string method;
  std::string target;
  std::string out_dir;
  double C = 0.0;
  double alpha0 = 0.5;
  double tol = 1e-10;
  int grid = 64;
  int terms = 10;
  int series_terms = 1 << 20;
  int stages = 20;
  int census_stages = 60;
  std::string grid_radii = "0.9,0.99,0.999";
  std::string recover_radii = "dyadic";
  int depth = 10;
  int angles = 256;
  int K = 64;
  int bundle_K = 4096;
  int max_log2N = 12;
  int entropy_stages = 60;
  int trials = 1000;
  std::uint64_t seed = 20240101;
};

std::string option_value(const CLI::Option* o) {
  if (o->count() == 0) return o->get_default_str();
  const auto& r = o->results();
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ";" : "") + r[i];
  return s;
}

/// Options of the app and the selected subcommand, sorted by name.
ordered_json resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::map<std::string, std::string> kv;
  for (const CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* o : a->get_options()) {
      const auto& names = o->get_lnames();
      if (names.empty() || names[0] == "help") continue;
      kv[names[0]] = option_value(o);
    }
  }
  ordered_json j;
  j["command"] = sub.get_name();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

/// `key = value` lines; `#` comments.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw korenblum::ParseError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw korenblum::ParseError(path + ":" + std::to_string(n) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

/// Expands --config into explicit flags placed before the command-line ones,
/// skipping keys the command line already sets.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> user;
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      config_path = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      user.push_back(a);
    }
  }
  if (config_path.empty()) return user;
  auto entries = read_config(config_path);
  std::string command;
  if (!user.empty() && user[0].rfind("-", 0) != 0) {
    command = user[0];
    user.erase(user.begin());
  }
  std::vector<std::string> injected;
  for (const auto& [k, v] : entries) {
    if (k == "command") {
      if (command.empty()) command = v;
      continue;
    }
    const std::string flag = "--" + k;
    const bool given = std::any_of(user.begin(), user.end(), [&](const std::string& u) {
      return u == flag || u.rfind(flag + "=", 0) == 0;
    });
    if (!given) {
      injected.push_back(flag);
      injected.push_back(v);
    }
  }
  std::vector<std::string> out;
  if (!command.empty()) out.push_back(command);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), user.begin(), user.end());
  return out;
}

// ---- commands -----------------------------------------------------------

void cmd_majorant_check(Run& run, const Opts& o) {
  const auto lam = parse_majorant(o.majorant);
  const auto adm = admissible(lam, o.grid);
  const auto g = classify_growth(lam, default_c_samples(), default_tail_log_grid());
  ordered_json j;
  j["majorant"] = lam.id();
  j["admissibility"] = to_json(adm);
  j["growth_class"] = to_json(g);
  run.emit_json(std::move(j));
  run.summary = lam.id() + " admissible=" + (adm.passed() ? "yes" : "no") + " growth=" + to_string(g.tag);
}

void cmd_entropy(Run& run, const Opts& o) {
  const auto lam = parse_majorant(o.majorant);
  const auto F = parse_set(o.set);
  if (o.terms < 1) throw korenblum::ParseError("--terms must be >= 1");
  const auto e = entropy(F, lam, o.terms);
  std::vector<Row> rows;
  const auto& entries = F.gap_entries();
  double partial = 0;
  const auto& spec = F.cantor();
  for (int i = 0; i < e.terms_used; ++i) {
    const auto& g = entries[i];
    partial += e.terms[i];
    std::string m, M;
    if (spec && g.stage > 0) {
      m = big(spec->m(g.stage));
      M = big(spec->M(g.stage));
    }
    rows.push_back({std::to_string(g.stage), m, M, big(g.count_log2), big(g.len_log2), num(e.terms[i]), num(partial)});
  }
  std::vector<std::string> comments{"set " + F.id(), "majorant " + lam.id()};
  comments.push_back("tail_bound=" + (e.tail_bound ? num(*e.tail_bound) : std::string("none")));
  if (run.format == "json") {
    ordered_json j;
    j["set"] = F.id();
    j["partial_sum"] = e.partial_sum;
    j["tail_bound"] = e.tail_bound ? ordered_json(*e.tail_bound) : ordered_json(nullptr);
    j["terms"] = e.terms;
    run.emit_json(std::move(j));
  } else {
    run.emit_csv(comments, {"k", "m_k", "M_k", "gap_count_log2", "gap_len_log2", "term", "partial_sum"}, rows);
  }
  run.summary = "entropy " + F.id() + " partial_sum=" + num(e.partial_sum) + " terms=" + std::to_string(e.terms_used);
}

void cmd_cantor_census(Run& run, const Opts& o) {
  std::string rule = o.cantor;
  if (rule.rfind("cantor:", 0) == 0) rule = rule.substr(7);
  const auto spec = parse_cantor_spec(rule);
  const auto lam = parse_majorant(o.majorant);
  if (o.stages < 1 || o.stages > CantorSpec::kStages) throw korenblum::ParseError("--stages out of range");
  const auto census = cantor_census(spec, o.stages);
  const auto series = cantor_entropy_series(spec, lam, o.stages);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < census.size(); ++i) {
    const auto& c = census[i];
    rows.push_back({std::to_string(c.k), big(c.m), big(c.M), big(c.gap_count_log2), big(c.gap_len_log2),
                    num(series.rows[i].term), num(series.rows[i].partial_sum)});
  }
  if (run.format == "json") {
    ordered_json j;
    j["cantor"] = spec.id();
    j["majorant"] = lam.id();
    j["series"] = to_json(series);
    j["max_M_over_m"] = spec.max_M_over_m(o.stages);
    run.emit_json(std::move(j));
  } else {
    run.emit_csv({"cantor " + spec.id(), "majorant " + lam.id(),
                  std::string("converges=") + (series.converges ? "1" : "0") +
                      " diverges=" + (series.diverges ? "1" : "0")},
                 {"k", "m_k", "M_k", "gap_count_log2", "gap_len_log2", "term", "partial_sum"}, rows);
  }
  run.summary = "cantor-census " + spec.id() + " stages=" + std::to_string(o.stages) +
                " converges=" + (series.converges ? "yes" : "no") + " diverges=" + (series.diverges ? "yes" : "no");
}

void cmd_mu_eval(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  ordered_json j;
  j["mu"] = mu.id();
  auto& arcs = j["arcs"] = ordered_json::array();
  for (const auto& s : o.arcs) {
    const Arc a = parse_arc(s);
    arcs.push_back({{"arc", a.str()}, {"value", mu.eval(a)}});
  }
  auto& th = j["mu_hat"] = ordered_json::array();
  for (const auto& s : o.thetas) {
    const Turn t = parse_angle(s);
    th.push_back({{"theta", t.str()}, {"value", mu.mu_hat(t.wrapped())}});
  }
  run.emit_json(std::move(j));
  run.summary = "mu-eval " + mu.id() + ": " + std::to_string(o.arcs.size()) + " arcs, " +
                std::to_string(o.thetas.size()) + " angles";
}

void cmd_norm(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  const auto lam = parse_majorant(o.majorant);
  auto n = norm_plus(mu, lam, o.depth);
  n.certified_upper = certified_norm_upper(mu, lam);
  ordered_json j = to_json(n);
  run.emit_json(std::move(j));
  run.summary = "norm lower=" + num(n.lower_bound) +
                " certified=" + (n.certified_upper ? num(*n.certified_upper) : std::string("none"));
}

std::vector<double> delta_schedule(const std::string& s) {
  if (s.empty() || s == "dyadic") {
    std::vector<double> d;
    for (int j = 1; j <= 20; ++j) d.push_back(std::ldexp(1.0, -j));
    return d;
  }
  return real_list(s);
}

void cmd_singular_part(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  const auto F = parse_set(o.set);
  const auto lam = parse_majorant(o.majorant);
  const auto np = nonpositivity_check(mu, F, lam, o.series_terms, o.depth);
  ordered_json j;
  j["mu"] = mu.id();
  j["set"] = F.id();
  j["series"] = to_json(np.series);
  j["nonpositivity"] = to_json(np);
  std::string extra;
  if (!F.lazy()) {
    const auto d = singular_part_delta(mu, F, delta_schedule(o.delta));
    j["delta"] = to_json(d);
    j["series_delta_gap"] = std::abs(np.series.value - d.value);
    extra = " delta=" + num(d.value);
  } else {
    j["delta"] = nullptr;
  }
  run.emit_json(std::move(j));
  run.summary = "singular-part " + F.id() + " series=" + num(np.series.value) + extra +
                " sign_ok=" + (np.sign_ok ? "yes" : "no");
}

void cmd_feasibility(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  const auto lam = parse_majorant(o.majorant);
  const double C = o.C > 0 ? o.C : default_probe_C(mu, lam, o.depth);
  ProbeSchedule sched = default_probe_schedule(o.max_log2N);
  if (!o.eps.empty()) sched.eps = real_list(o.eps);
  if (!o.M.empty()) {
    sched.M_factors.clear();
    for (double m : real_list(o.M)) sched.M_factors.push_back(m / C);
  }
  if (!o.N.empty()) {
    sched.N.clear();
    for (double n : real_list(o.N)) {
      if (n < 1 || n != std::floor(n) || n > (1 << 20)) throw korenblum::ParseError("N must be an integer in [1, 2^20]");
      sched.N.push_back(static_cast<int>(n));
    }
    std::sort(sched.N.begin(), sched.N.end());
  }
  for (double e : sched.eps) {
    if (!(e > 0)) throw korenblum::ParseError("eps must be positive");
  }
  for (double f : sched.M_factors) {
    if (!(f > 0)) throw korenblum::ParseError("M must be positive");
  }
  const auto rep = abs_continuity_probe(mu, lam, C, sched);
  ordered_json j = to_json(rep);
  j["mu"] = mu.id();
  j["majorant"] = lam.id();
  run.emit_json(std::move(j));
  run.summary = "feasibility " + rep.summary;
  if (rep.obstruction) run.exit_code = kObstruction;
}

void cmd_poisson(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  PoissonOptions po;
  po.quadrature.abs_tol = o.tol;
  PoissonField field(mu, po);
  ordered_json j;
  j["mu"] = mu.id();
  auto& vals = j["values"] = ordered_json::array();
  const std::vector<std::string> zs = o.zs.empty() ? std::vector<std::string>{"0.5,0"} : o.zs;
  for (const auto& s : zs) {
    const Complex z = to_complex(s);
    vals.push_back({{"re", z.real()}, {"im", z.imag()}, {"value", field(z)}});
  }
  run.emit_json(std::move(j));
  run.summary = "poisson " + mu.id() + ": " + std::to_string(zs.size()) + " points";
}

std::vector<double> radii_list(const std::string& s, std::vector<double> dflt) {
  if (s.empty()) return dflt;
  if (s == "dyadic") {
    std::vector<double> r;
    for (int j = 4; j <= 12; ++j) r.push_back(1 - std::ldexp(1.0, -j));
    return r;
  }
  auto r = real_list(s);
  for (double x : r) {
    if (!(x >= 0 && x <= kMaxRadius)) throw korenblum::ParseError("radius outside [0, 0.9999]");
  }
  return r;
}

void cmd_poisson_grid(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  const auto lam = parse_majorant(o.majorant);
  const auto radii = radii_list(o.grid_radii, {0.9, 0.99, 0.999});
  if (o.angles < 1) throw korenblum::ParseError("--angles must be >= 1");
  const auto cert = certified_norm_upper(mu, lam);
  const double norm = cert ? *cert : norm_plus(mu, lam, o.depth).lower_bound;
  PoissonField field(mu);
  std::vector<Row> rows;
  double max_ratio = -INFINITY;
  for (double r : radii) {
    for (int i = 0; i < o.angles; ++i) {
      const double th = static_cast<double>(i) / o.angles;
      const double v = field(std::polar(r, 2 * kPi * th));
      const double ratio = v / (norm * lam(1 - r));
      max_ratio = std::max(max_ratio, ratio);
      rows.push_back({num(r), num(th), num(v), num(ratio)});
    }
  }
  run.emit_csv({"mu " + mu.id(), "majorant " + lam.id(),
                std::string("norm=") + num(norm) + (cert ? " certified" : " lower-bound")},
               {"r", "theta", "value", "bound_ratio"}, rows);
  run.summary = "poisson-grid max bound ratio " + num(max_ratio);
}

void cmd_recover(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  if (o.arcs.size() != 1) throw korenblum::ParseError("recover needs exactly one --arc");
  const Arc I = parse_arc(o.arcs[0]);
  const auto radii = radii_list(o.recover_radii, {});
  std::vector<RecoveryRow> rows;
  if (o.method == "generic") {
    PoissonField field(mu);
    rows = recover_premeasure([&](Complex z) { return field(z); }, I, radii);
  } else if (o.method == "poisson" || o.method.empty()) {
    rows = recover_poisson(mu, I, radii);
  } else {
    throw korenblum::ParseError("--method is poisson or generic");
  }
  const double exact = mu.eval(I);
  std::vector<Row> out;
  for (const auto& r : rows) out.push_back({num(r.r), num(r.value), num(exact), num(std::abs(r.value - exact))});
  run.emit_csv({"mu " + mu.id(), "arc " + I.str()}, {"r", "recovered", "exact", "error"}, out);
  run.summary = "recover " + I.str() + " last error " + num(std::abs(rows.back().value - exact));
}

void cmd_herglotz(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  PoissonField field(mu);
  ordered_json j;
  j["mu"] = mu.id();
  auto& vals = j["values"] = ordered_json::array();
  const std::vector<std::string> zs = o.zs.empty() ? std::vector<std::string>{"0.5,0"} : o.zs;
  for (const auto& s : zs) {
    const Complex z = to_complex(s);
    const Complex f = herglotz_eval(mu, z);
    vals.push_back({{"re", z.real()},
                    {"im", z.imag()},
                    {"f_re", f.real()},
                    {"f_im", f.imag()},
                    {"modulus", std::abs(f)},
                    {"exp_poisson", std::exp(field(z))}});
  }
  run.emit_json(std::move(j));
  run.summary = "herglotz " + mu.id() + ": " + std::to_string(zs.size()) + " points";
}

VerdictConfig verdict_config(const Opts& o) {
  VerdictConfig c;
  c.probe_max_log2N = o.max_log2N;
  c.entropy_stages = o.entropy_stages;
  c.norm_depth = o.depth;
  return c;
}

std::vector<double> sweep_alphas(const std::string& s) {
  const auto v = real_list(s);
  if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) {
    throw korenblum::ParseError("--alpha-sweep is a,b,n with integer n >= 1");
  }
  const int n = static_cast<int>(v[2]);
  std::vector<double> a;
  for (int i = 0; i < n; ++i) a.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1));
  for (double x : a) {
    if (!(x > 0)) throw korenblum::ParseError("alpha must be positive");
  }
  return a;
}

void cmd_verdict(Run& run, const Opts& o) {
  const auto mu = parse_premeasure(o.mu);
  if (!o.alpha_sweep.empty()) {
    const auto sw = alpha_sweep(mu, sweep_alphas(o.alpha_sweep), verdict_config(o));
    run.emit_json(to_json(sw));
    std::string line = "verdict sweep:";
    for (const auto& r : sw.reports) line += " " + num(*r.alpha) + "->" + to_string(r.verdict);
    run.summary = line;
    return;
  }
  const auto lam = parse_majorant(o.majorant);
  const auto rep = verdict(mu, lam, verdict_config(o));
  run.emit_json(to_json(rep));
  run.summary = "verdict " + to_string(rep.verdict) + " (" + rep.grade + ")";
}

void cmd_example1(Run& run, const Opts& o) {
  const auto ex = example1_build(o.alpha0);
  if (o.census_stages < 1 || o.census_stages > CantorSpec::kStages) throw korenblum::ParseError("--stages out of range");
  const auto census = cantor_census(ex.spec, o.census_stages);
  if (run.format == "csv") {
    std::vector<Row> rows;
    for (const auto& c : census) {
      rows.push_back({std::to_string(c.k), big(c.m), big(c.M), big(c.gap_count_log2), big(c.gap_len_log2),
                      num(c.gap_measure)});
    }
    run.emit_csv({"cantor " + ex.spec.id()}, {"k", "m_k", "M_k", "gap_count_log2", "gap_len_log2", "gap_measure"},
                 rows);
    run.summary = "example1 census " + std::to_string(o.census_stages) + " stages";
    return;
  }
  ordered_json j;
  j["cantor"] = ex.spec.id();
  j["mu"] = ex.mu.id();
  auto& rows = j["census"] = ordered_json::array();
  for (const auto& c : census) {
    rows.push_back({{"k", c.k}, {"m_k", big(c.m)}, {"M_k", big(c.M)}, {"gap_count_log2", big(c.gap_count_log2)},
                    {"gap_len_log2", big(c.gap_len_log2)}});
  }
  j["max_M_over_m"] = ex.spec.max_M_over_m(o.census_stages);
  const auto sw = alpha_sweep(ex.mu, {o.alpha0 / 2, o.alpha0, (1 + o.alpha0) / 2}, verdict_config(o));
  j["sweep"] = to_json(sw);
  run.emit_json(std::move(j));
  std::string line = "example1:";
  for (const auto& r : sw.reports) line += " " + num(*r.alpha) + "->" + to_string(r.verdict);
  run.summary = line;
}

void cmd_example2(Run& run, const Opts& o) {
  const auto b = example2_build({o.alpha0, o.K, {}});
  const auto& d = *b.data;
  std::vector<Row> rows;
  double pv = 0;
  for (int k = 0; k < d.K; ++k) {
    pv += d.v[k];
    rows.push_back({std::to_string(k + 1), num(d.u[k]), num(d.v[k]), num(d.start[k]), num(pv)});
  }
  if (run.format == "csv") {
    run.emit_csv({"deficit=" + num(d.deficit), "normalizer=" + num(d.normalizer),
                  "untruncated_tail=" + num(d.untruncated_tail)},
                 {"k", "u_k", "v_k", "start", "partial_v"}, rows);
    run.summary = "example2 K=" + std::to_string(d.K) + " deficit=" + num(d.deficit);
    return;
  }
  ordered_json j;
  j["mu"] = b.mu.id();
  j["K"] = d.K;
  j["normalizer"] = d.normalizer;
  j["deficit"] = d.deficit;
  j["untruncated_tail"] = d.untruncated_tail;
  j["v_growth_floor"] = b.v_growth_floor;
  auto& blocks = j["blocks"] = ordered_json::array();
  pv = 0;
  for (int k = 0; k < d.K; ++k) {
    pv += d.v[k];
    blocks.push_back({{"k", k + 1}, {"u_k", d.u[k]}, {"v_k", d.v[k]}, {"start", d.start[k]}, {"partial_v", pv}});
  }
  const auto sw = alpha_sweep(b.mu, {o.alpha0 / 2, o.alpha0, (1 + o.alpha0) / 2}, verdict_config(o));
  j["sweep"] = to_json(sw);
  run.emit_json(std::move(j));
  std::string line = "example2 K=" + std::to_string(d.K) + ":";
  for (const auto& r : sw.reports) line += " " + num(*r.alpha) + "->" + to_string(r.verdict);
  run.summary = line;
}

void cmd_reproduce(Run& run, const Opts& o) {
  ReproduceConfig rc;
  rc.target = o.target;
  rc.out_dir = o.out_dir.empty() ? "reproduce-" + o.target : o.out_dir;
  rc.seed = o.seed;
  rc.alpha0 = o.alpha0;
  rc.K = o.bundle_K;
  rc.majorant = o.majorant;
  rc.trials = o.trials;
  // Output locations are not part of the bundle content.
  ordered_json cfg = run.config;
  cfg.erase("out-dir");
  cfg.erase("output");
  const auto res = reproduce(rc, cfg);
  run.summary = res.summary + " -> " + rc.out_dir;
  run.exit_code = res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Premeasures, Lambda-entropy and cyclicity computations on the unit circle", "korenblum"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Run run;
  Opts o;
  std::string format;
  app.add_option("--format", format, "json or csv (default depends on the command)")
      ->check(CLI::IsMember({"", "json", "csv"}));
  app.add_option("--output,-o", run.output, "Output file (default stdout)");
  app.set_help_flag("--help,-h", "Print help");
  app.footer("Flags may also come from --config <file> (key = value lines); command-line flags win.");

  std::map<std::string, std::pair<std::string, void (*)(Run&, const Opts&)>> table;
  auto sub = [&](const std::string& name, const std::string& desc, const std::string& fmt,
                 void (*fn)(Run&, const Opts&)) {
    table[name] = {fmt, fn};
    return app.add_subcommand(name, desc);
  };
  auto majorant = [&](CLI::App* s) { s->add_option("--majorant", o.majorant, "Majorant spec"); };
  auto mu = [&](CLI::App* s) { s->add_option("--mu", o.mu, "Premeasure spec")->required(); };

  auto* s = sub("majorant-check", "Admissibility and growth class of a majorant", "json", cmd_majorant_check);
  s->add_option("--majorant", o.majorant, "Majorant spec")->required();
  s->add_option("--grid", o.grid, "Grid size");

  s = sub("entropy", "Lambda-entropy partial sums of a closed set", "csv", cmd_entropy);
  s->add_option("--set", o.set, "Set spec")->required();
  majorant(s);
  s->add_option("--terms", o.terms, "Number of complementary entries");

  s = sub("cantor-census", "Stage census and entropy terms of a Cantor rule", "csv", cmd_cantor_census);
  s->add_option("--cantor", o.cantor, "Cantor rule")->required();
  majorant(s);
  s->add_option("--stages", o.stages, "Number of stages");

  s = sub("mu-eval", "Evaluate a premeasure on arcs and its distribution at angles", "json", cmd_mu_eval);
  mu(s);
  s->add_option("--arc", o.arcs, "Arc, e.g. [0,1/4) (repeatable)");
  s->add_option("--theta", o.thetas, "Angle in turns (repeatable)");

  s = sub("norm", "Lambda-norm bounds", "json", cmd_norm);
  mu(s);
  majorant(s);
  s->add_option("--depth", o.depth, "Dyadic search depth")->check(CLI::Range(1, 13));

  s = sub("singular-part", "Lambda-singular part on a Carleson set", "json", cmd_singular_part);
  mu(s);
  s->add_option("--set", o.set, "Set spec")->required();
  majorant(s);
  s->add_option("--terms", o.series_terms, "Series terms");
  s->add_option("--delta", o.delta, "Radii schedule in radians, comma list or 'dyadic'");
  s->add_option("--depth", o.depth, "Norm search depth")->check(CLI::Range(1, 13));

  s = sub("feasibility", "Finite-resolution absolute-continuity probe", "json", cmd_feasibility);
  mu(s);
  majorant(s);
  s->add_option("--C", o.C, "Constant C (0: automatic)");
  s->add_option("--eps", o.eps, "eps list (default 2^0..2^-12)");
  s->add_option("--M", o.M, "M list (default 4C,16C,64C)");
  s->add_option("--N", o.N, "N list (default 2..2^max-log2N)");
  s->add_option("--max-log2N", o.max_log2N, "Largest default N exponent")->check(CLI::Range(1, 16));
  s->add_option("--depth", o.depth, "Norm search depth for automatic C")->check(CLI::Range(1, 13));

  s = sub("poisson", "Poisson integral at points", "json", cmd_poisson);
  mu(s);
  s->add_option("--z", o.zs, "Point re,im (repeatable)");
  s->add_option("--tol", o.tol, "Quadrature tolerance");

  s = sub("poisson-grid", "Poisson integral on a polar grid with growth-bound ratios", "csv", cmd_poisson_grid);
  mu(s);
  majorant(s);
  s->add_option("--radii", o.grid_radii, "Radius list");
  s->add_option("--angles", o.angles, "Angles per radius");
  s->add_option("--depth", o.depth, "Norm search depth")->check(CLI::Range(1, 13));

  s = sub("recover", "Recover mu(I) from the Poisson integral along radii", "csv", cmd_recover);
  mu(s);
  s->add_option("--arc", o.arcs, "Arc")->required();
  s->add_option("--radii", o.recover_radii, "Radius list or 'dyadic' (1-2^-j, j=4..12)");
  s->add_option("--method", o.method, "poisson or generic")->default_val("poisson");

  s = sub("herglotz", "Herglotz exponential f_mu at points", "json", cmd_herglotz);
  mu(s);
  s->add_option("--z", o.zs, "Point re,im (repeatable)");

  s = sub("verdict", "Cyclicity verdict", "json", cmd_verdict);
  mu(s);
  majorant(s);
  s->add_option("--alpha-sweep", o.alpha_sweep, "a,b,n: logpow majorants p = a..b");
  s->add_option("--max-log2N", o.max_log2N, "Probe N up to 2^this")->check(CLI::Range(1, 16));
  s->add_option("--entropy-stages", o.entropy_stages, "Cantor stages for entropy")->check(CLI::Range(10, 256));
  s->add_option("--depth", o.depth, "Norm search depth")->check(CLI::Range(1, 13));

  s = sub("example1", "Example-1 construction census and verdict sweep", "json", cmd_example1);
  s->add_option("--alpha0", o.alpha0, "alpha0 in (0,1)");
  s->add_option("--stages", o.census_stages, "Census stages");
  s->add_option("--max-log2N", o.max_log2N, "Probe N up to 2^this")->check(CLI::Range(1, 16));

  s = sub("example2", "Example-2 construction and verdict sweep", "json", cmd_example2);
  s->add_option("--alpha0", o.alpha0, "alpha0 in (0,1)");
  s->add_option("--K", o.K, "Number of blocks")->check(CLI::Range(1, 1 << 20));
  s->add_option("--max-log2N", o.max_log2N, "Probe N up to 2^this")->check(CLI::Range(1, 16));

  s = sub("reproduce", "Write an artifact bundle for a workflow", "json", cmd_reproduce);
  s->add_option("--target", o.target, "example1 | example2 | poisson-bound | feasibility-oracle")
      ->required()
      ->check(CLI::IsMember({"example1", "example2", "poisson-bound", "feasibility-oracle"}));
  s->add_option("--out-dir", o.out_dir, "Bundle directory (default reproduce-<target>)");
  s->add_option("--seed", o.seed, "Seed for randomized suites");
  s->add_option("--alpha0", o.alpha0, "alpha0 for the example targets");
  s->add_option("--K", o.bundle_K, "Example-2 blocks")->check(CLI::Range(3, 1 << 20));
  s->add_option("--trials", o.trials, "Oracle trials per N")->check(CLI::Range(1, 1000000));
  majorant(s);

  try {
    auto args = merge_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  } catch (const korenblum::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  run.command = chosen->get_name();
  const auto& entry = table.at(run.command);
  run.format = format.empty() ? entry.first : format;
  run.config = resolved_config(app, *chosen);
  run.config["format"] = run.format;
  try {
    entry.second(run, o);
  } catch (const korenblum::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  std::cerr << "korenblum " << run.command << ": " << run.summary << "\n";
  return run.exit_code;
}
