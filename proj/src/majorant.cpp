#include "korenblum/majorant.hpp"

#include "korenblum/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// log(a + b) given la = log a, lb = log b.
double log_add(double la, double lb) {
  if (la < lb) std::swap(la, lb);
  if (lb == -std::numeric_limits<double>::infinity()) return la;
  return la + std::log1p(std::exp(lb - la));
}

}  // namespace

Majorant Majorant::log_power(double p, double shift) {
  if (!(p > 0)) throw std::invalid_argument("log-power exponent must be positive");
  Majorant m;
  m.family_ = MajorantFamily::LogPower;
  m.p_ = p;
  m.c_ = shift < 0 ? std::max(2.0, p + 1.0) : shift;
  // t^a Lambda(t) is non-decreasing iff a (c + log 1/t) >= p for all t.
  double alpha = std::min(1.0, p) / 2.0;
  if (m.c_ > 0) alpha = std::max(alpha, p / m.c_);
  m.witness_alpha_ = alpha;
  m.doubling_C_ = std::pow(2.0, p);
  m.id_ = "logpow:p=" + fmt_real(p) + ",c=" + fmt_real(m.c_);
  return m;
}

Majorant Majorant::log_log(double shift) {
  Majorant m;
  m.family_ = MajorantFamily::LogLog;
  m.p_ = 0.0;
  m.c_ = shift < 0 ? std::exp(2.0) : shift;
  m.witness_alpha_ = 0.5;
  m.doubling_C_ = 1.5;
  m.id_ = "loglog:c=" + fmt_real(m.c_);
  return m;
}

Majorant Majorant::tabulated(std::vector<double> t, std::vector<double> values) {
  if (t.size() != values.size() || t.size() < 2) {
    throw std::invalid_argument("majorant table needs at least two (t, value) rows");
  }
  std::vector<double> u(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0 && t[i] <= 1)) throw std::invalid_argument("table t outside (0,1]");
    if (i > 0 && !(t[i] < t[i - 1])) throw std::invalid_argument("table t must strictly decrease");
    u[i] = -std::log(t[i]);
  }
  Majorant m;
  m.family_ = MajorantFamily::Tabulated;
  m.witness_alpha_ = 0.5;
  m.doubling_C_ = 2.0;
  m.table_u_ = std::make_shared<const std::vector<double>>(std::move(u));
  m.table_v_ = std::make_shared<const std::vector<double>>(std::move(values));
  m.id_ = "table";
  return m;
}

Majorant Majorant::tabulated_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open majorant table '" + path + "'");
  std::vector<double> t, v;
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream row(s);
    double a = 0, b = 0;
    if (!(row >> a >> b)) throw ParseError("bad majorant table row: '" + s + "'");
    t.push_back(a);
    v.push_back(b);
  }
  try {
    Majorant m = tabulated(std::move(t), std::move(v));
    m.id_ = "table:" + path;
    return m;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Majorant Majorant::custom(std::string id, std::function<double(double)> of_t, double witness_alpha,
                          double doubling_C) {
  Majorant m;
  m.family_ = MajorantFamily::Custom;
  m.custom_ = std::move(of_t);
  m.witness_alpha_ = witness_alpha;
  m.doubling_C_ = doubling_C;
  m.id_ = std::move(id);
  return m;
}

double Majorant::max_log() const {
  if (family_ == MajorantFamily::Tabulated) return table_u_->back();
  return std::numeric_limits<double>::infinity();
}

double Majorant::eval(double t) const {
  if (!(t > 0 && t <= 1)) throw std::domain_error("majorant argument outside (0,1]");
  if (family_ == MajorantFamily::Custom) return custom_(t);
  return eval_log(-std::log(t));
}

double Majorant::eval_log(double u) const {
  if (!(u >= 0)) throw std::domain_error("majorant log-argument must be >= 0");
  switch (family_) {
    case MajorantFamily::LogPower:
      return std::pow(c_ + u, p_);
    case MajorantFamily::LogLog:
      return std::log(c_ + u);
    case MajorantFamily::Tabulated: {
      const auto& us = *table_u_;
      const auto& vs = *table_v_;
      if (u < us.front() || u > us.back()) {
        throw std::domain_error("majorant table does not cover t = exp(-" + fmt_real(u) + ")");
      }
      auto it = std::upper_bound(us.begin(), us.end(), u);
      if (it == us.end()) return vs.back();
      const std::size_t i = static_cast<std::size_t>(it - us.begin());
      const double w = (u - us[i - 1]) / (us[i] - us[i - 1]);
      return vs[i - 1] + w * (vs[i] - vs[i - 1]);
    }
    case MajorantFamily::Custom:
      return custom_(std::exp(-u));
  }
  return 0.0;
}

Majorant parse_majorant(std::string_view spec) {
  const std::string s = detail::trim(spec);
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "table") {
    if (rest.empty()) throw ParseError("table majorant needs a path");
    return Majorant::tabulated_from_file(rest);
  }
  const auto kv = detail::parse_kv(rest);
  auto get = [&](const std::string& key, double def) {
    auto it = kv.find(key);
    return it == kv.end() ? def : detail::parse_real(it->second);
  };
  for (const auto& [key, value] : kv) {
    if (key != "p" && key != "c") throw ParseError("unknown majorant parameter '" + key + "'");
  }
  try {
    if (head == "logpow") {
      if (!kv.count("p")) throw ParseError("logpow majorant needs p=<real>");
      const double c = get("c", -1.0);
      if (kv.count("c") && c < 0) throw ParseError("majorant shift must be >= 0");
      return Majorant::log_power(get("p", 1.0), c);
    }
    if (head == "loglog") {
      const double c = get("c", -1.0);
      if (kv.count("c") && c < 0) throw ParseError("majorant shift must be >= 0");
      return Majorant::log_log(c);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown majorant family '" + head + "'");
}

bool AdmissibilityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AdmissibilityReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no axiom check named " + std::string(name));
}

AdmissibilityReport admissible(const Majorant& lambda, int grid_size) {
  if (grid_size < 16) throw std::invalid_argument("admissible() needs grid_size >= 16");
  AdmissibilityReport report;
  report.witness_alpha = lambda.witness_alpha();
  report.doubling_C = lambda.doubling_C();

  // t_j = 2^-j restricted to what the majorant covers.
  std::vector<double> t, u, v;
  for (int j = 0; j <= grid_size; ++j) {
    const double uj = j * std::numbers::ln2;
    if (uj > lambda.max_log()) break;
    t.push_back(std::ldexp(1.0, -j));
    u.push_back(uj);
    v.push_back(lambda.eval_log(uj));
  }
  const int n = static_cast<int>(t.size());
  report.grid_points = n;
  const double tol = kAxiomTolerance;

  auto min_over = [&](int from, int to, auto&& quantity) {
    AxiomCheck c;
    c.margin = std::numeric_limits<double>::infinity();
    for (int j = from; j < to; ++j) {
      const double q = quantity(j);
      if (q < c.margin || std::isnan(q)) {
        c.margin = q;
        c.worst_index = j;
      }
    }
    return c;
  };

  {
    AxiomCheck c = min_over(0, n, [&](int j) { return v[j]; });
    c.name = "positive";
    c.passed = c.margin > 0;
    report.checks.push_back(c);
  }
  {
    AxiomCheck c = min_over(0, n - 1, [&](int j) { return v[j + 1] - v[j]; });
    c.name = "non-increasing";
    c.passed = c.margin >= -tol;
    report.checks.push_back(c);
  }
  {
    // Strict growth over the last quarter of the grid: no plateau toward t = 0.
    AxiomCheck c = min_over(std::max(0, n - 1 - n / 4), n - 1, [&](int j) { return v[j + 1] - v[j]; });
    c.name = "unbounded";
    c.passed = c.margin > tol;
    report.checks.push_back(c);
  }
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = t[j] * v[j];
  {
    AxiomCheck c = min_over(0, n - 1, [&](int j) { return g[j] - g[j + 1]; });
    c.name = "t*Lambda non-decreasing";
    c.passed = c.margin >= -tol;
    report.checks.push_back(c);
  }
  {
    std::vector<double> slope(n > 1 ? n - 1 : 0);
    for (int j = 0; j + 1 < n; ++j) slope[j] = (g[j] - g[j + 1]) / (t[j] - t[j + 1]);
    AxiomCheck c = min_over(0, n - 2, [&](int j) { return slope[j + 1] - slope[j]; });
    c.name = "t*Lambda concave";
    c.passed = c.margin >= -tol;
    report.checks.push_back(c);
  }
  {
    AxiomCheck c;
    c.name = "t*Lambda -> 0";
    c.worst_index = n - 1;
    c.margin = std::ldexp(v[0], -grid_size / 2) - g[n - 1];
    c.passed = n == grid_size + 1 && c.margin >= 0;
    report.checks.push_back(c);
  }
  {
    const double a = lambda.witness_alpha();
    std::vector<double> h(n);
    for (int j = 0; j < n; ++j) h[j] = std::exp(-a * u[j]) * v[j];
    AxiomCheck c = min_over(0, n - 1, [&](int j) { return h[j] - h[j + 1]; });
    c.name = "t^alpha*Lambda non-decreasing";
    c.passed = a > 0 && a < 1 && c.margin >= -tol;
    report.checks.push_back(c);
  }
  {
    double measured = 0;
    AxiomCheck c;
    c.name = "doubling";
    c.margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (2 * u[j] > lambda.max_log()) break;
      const double sq = lambda.eval_log(2 * u[j]);
      measured = std::max(measured, sq / v[j]);
      const double q = lambda.doubling_C() * v[j] - sq;
      if (q < c.margin) {
        c.margin = q;
        c.worst_index = j;
      }
    }
    c.passed = lambda.doubling_C() >= 1 && c.margin >= -tol;
    report.measured_doubling = measured;
    report.checks.push_back(c);
  }
  return report;
}

std::string to_string(GrowthTag tag) {
  switch (tag) {
    case GrowthTag::C1:
      return "C1";
    case GrowthTag::C2:
      return "C2";
    case GrowthTag::Neither:
      return "neither";
  }
  return "neither";
}

std::vector<double> default_tail_log_grid() {
  std::vector<double> u;
  for (int j = 1; j <= 48; ++j) u.push_back(std::ldexp(1.0, j));
  return u;
}

std::vector<double> default_c_samples() { return {0.5, 1.0, 2.0, 8.0, 32.0}; }

GrowthClass classify_growth(const Majorant& lambda, const std::vector<double>& c_samples,
                            const std::vector<double>& tail_log_grid) {
  for (std::size_t i = 1; i < tail_log_grid.size(); ++i) {
    if (!(tail_log_grid[i] > tail_log_grid[i - 1])) {
      throw std::invalid_argument("tail grid must move strictly toward t = 0");
    }
  }
  GrowthClass out;
  const int n = static_cast<int>(tail_log_grid.size());
  const int from = std::max(0, n - kGrowthTailPoints);

  // Concavity of x -> exp(c Lambda(1/x)) via chords, x = e^u, all in logs.
  bool concave_all = n - from >= 3 && !c_samples.empty();
  for (double c : c_samples) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = from; i + 2 < n; ++i) {
      const double u1 = tail_log_grid[i], u2 = tail_log_grid[i + 1], u3 = tail_log_grid[i + 2];
      const double l1 = c * lambda.eval_log(u1);
      const double l2 = c * lambda.eval_log(u2);
      const double l3 = c * lambda.eval_log(u3);
      // chord(x2) = phi1 (x3-x2)/(x3-x1) + phi3 (x2-x1)/(x3-x1)
      const double log_den = std::log(-std::expm1(u1 - u3));
      const double log_w1 = std::log(-std::expm1(u2 - u3)) - log_den;
      const double log_w3 = (u2 - u3) + std::log(-std::expm1(u1 - u2)) - log_den;
      const double chord = log_add(l1 + log_w1, l3 + log_w3);
      const double m = (l2 - chord) / std::max(1.0, std::abs(l2));
      margin = std::min(margin, m);
    }
    out.concavity_margins.emplace_back(c, margin);
    if (!(margin >= -kAxiomTolerance)) concave_all = false;
  }
  out.c1 = concave_all;

  bool increasing = n - from >= 2;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = from; i < n; ++i) {
    const double r = lambda.eval_log(tail_log_grid[i]) / (1.0 + tail_log_grid[i]);
    out.ratio_samples.emplace_back(tail_log_grid[i], r);
    if (!(r > prev)) increasing = false;
    prev = r;
  }
  out.c2 = increasing && !out.ratio_samples.empty() &&
           out.ratio_samples.back().second >= kC2RatioThreshold;

  if (out.c1) {
    out.tag = GrowthTag::C1;
  } else if (out.c2) {
    out.tag = GrowthTag::C2;
  }
  return out;
}

}  // namespace korenblum
