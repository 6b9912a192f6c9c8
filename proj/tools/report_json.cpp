#include "report_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace korenblum::cli {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string big(const BigInt& x) { return x.str(); }

std::string csv_text(const ordered_json& config, const std::vector<std::string>& comments, const Row& header,
                     const std::vector<Row>& rows) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "# config=" << config.dump() << "\n";
  for (const auto& c : comments) os << "# " << c << "\n";
  auto line = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

namespace {

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

ordered_json to_json(const AdmissibilityReport& r) {
  ordered_json j;
  j["passed"] = r.passed();
  j["witness_alpha"] = r.witness_alpha;
  j["doubling_C"] = r.doubling_C;
  j["measured_doubling"] = r.measured_doubling;
  j["grid_points"] = r.grid_points;
  auto& checks = j["checks"] = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", c.margin}, {"worst_index", c.worst_index}});
  }
  return j;
}

ordered_json to_json(const GrowthClass& g) {
  ordered_json j;
  j["tag"] = to_string(g.tag);
  j["c1"] = g.c1;
  j["c2"] = g.c2;
  auto& m = j["concavity_margins"] = ordered_json::array();
  for (const auto& [c, v] : g.concavity_margins) m.push_back({{"c", c}, {"margin", v}});
  auto& s = j["ratio_samples"] = ordered_json::array();
  for (const auto& [u, v] : g.ratio_samples) s.push_back({{"u", u}, {"ratio", v}});
  return j;
}

ordered_json to_json(const NormEstimate& n) {
  return {{"lower_bound", n.lower_bound},
          {"certified_upper", opt(n.certified_upper)},
          {"search_depth", n.search_depth},
          {"attained_length", n.attained_length}};
}

ordered_json to_json(const SingularPartResult& r) {
  ordered_json j;
  j["value"] = r.value;
  j["method"] = to_string(r.method);
  j["terms_used"] = r.terms_used;
  j["tail_bound"] = opt(r.tail_bound);
  if (r.method == SingularMethod::DeltaLimit) {
    auto& t = j["delta_trace"] = ordered_json::array();
    for (const auto& [d, v] : r.delta_trace) t.push_back({{"delta", d}, {"value", v}});
    j["trace_monotone"] = r.trace_monotone;
  }
  return j;
}

ordered_json to_json(const NonpositivityReport& r) {
  return {{"series", to_json(r.series)},     {"entropy", r.entropy},
          {"norm", r.norm},                  {"norm_certified", r.norm_certified},
          {"sign_ok", r.sign_ok},            {"entropy_bound_ok", r.entropy_bound_ok},
          {"tolerance", r.tolerance}};
}

ordered_json to_json(const FeasibilityReport& r) {
  ordered_json j;
  j["feasible"] = r.feasible;
  j["N"] = r.N;
  j["params"] = {{"C", r.params.C}, {"eps", r.params.eps}, {"M", r.params.M}};
  if (!r.feasible) {
    auto& cells = j["covering_cells"] = ordered_json::array();
    for (const auto& [k, l] : r.covering_cells) cells.push_back({k, l});
    j["covering_sum"] = r.covering_sum;
    if (r.violating_covering) {
      auto& arcs = j["covering_arcs"] = ordered_json::array();
      for (const auto& a : r.violating_covering->arcs()) arcs.push_back(a.str());
    }
  }
  if (r.min_covering_sum) j["min_covering_sum"] = *r.min_covering_sum;
  return j;
}

ordered_json to_json(const ProbeReport& r) {
  ordered_json j;
  j["C"] = r.C;
  j["obstruction"] = r.obstruction;
  j["obstruction_eps"] = opt(r.obstruction_eps);
  j["summary"] = r.summary;
  auto& cells = j["cells"] = ordered_json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"eps", c.eps},
                     {"M", c.M},
                     {"largest_N", c.largest_N},
                     {"first_infeasible_N", c.first_infeasible_N ? ordered_json(*c.first_infeasible_N)
                                                                 : ordered_json(nullptr)}});
  }
  if (r.witness_cell && r.witness_cell->obstruction) {
    j["witness"] = to_json(*r.witness_cell->obstruction);
  }
  return j;
}

ordered_json to_json(const EntropySeries& s) {
  ordered_json j;
  j["converges"] = s.converges;
  j["diverges"] = s.diverges;
  j["envelope"] = s.envelope;
  j["last_ratio"] = s.last_ratio;
  auto& rows = j["rows"] = ordered_json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"k", r.k}, {"m_k", big(r.m)}, {"M_k", big(r.M)}, {"term", r.term}, {"partial_sum", r.partial_sum}});
  }
  return j;
}

ordered_json to_json(const OmegaBoundReport& r) {
  ordered_json j;
  j["bounded"] = r.bounded;
  j["max_ratio"] = r.max_ratio;
  j["structural_bound"] = r.structural_bound;
  j["stage_ratio_decreasing"] = r.stage_ratio_decreasing;
  auto& rows = j["rows"] = ordered_json::array();
  for (const auto& x : r.rows) rows.push_back({{"t", x.t}, {"omega", x.omega}, {"ratio", x.ratio}});
  return j;
}

ordered_json to_json(const VerdictReport& r) {
  ordered_json j;
  j["majorant"] = r.majorant_id;
  j["mu"] = r.mu_id;
  if (r.alpha) j["alpha"] = *r.alpha;
  j["growth_class"] = to_json(r.growth);
  ordered_json ev;
  ev["analytic"] = r.analytic_evidence;
  ev["computational"] = r.computational_evidence;
  auto& computed = ev["computed"] = ordered_json::array();
  for (const auto& c : r.candidates) {
    ordered_json x;
    x["set"] = c.set_id;
    x["source"] = c.source;
    x["carleson_certified"] = c.carleson_certified;
    x["entropy"] = opt(c.entropy);
    x["result"] = c.result ? to_json(*c.result) : ordered_json(nullptr);
    if (!c.note.empty()) x["note"] = c.note;
    computed.push_back(std::move(x));
  }
  if (r.probe) {
    ev["probe"] = {{"C", r.probe->C}, {"obstruction", r.probe->obstruction}, {"summary", r.probe->summary}};
  } else {
    ev["probe"] = nullptr;
  }
  j["singular_evidence"] = std::move(ev);
  j["verdict"] = to_string(r.verdict);
  j["grade"] = r.grade;
  j["truncated_construction"] = r.truncated_construction;
  j["notes"] = r.notes;
  return j;
}

ordered_json to_json(const SweepReport& s) {
  ordered_json j;
  auto& reps = j["reports"] = ordered_json::array();
  for (const auto& r : s.reports) reps.push_back(to_json(r));
  j["flips"] = s.flips;
  j["single_flip"] = s.single_flip;
  return j;
}

}  // namespace korenblum::cli
