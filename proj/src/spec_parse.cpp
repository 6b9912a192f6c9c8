#include "korenblum/spec_parse.hpp"

#include "korenblum/cyclicity.hpp"
#include "korenblum/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace korenblum {

namespace {

struct Term {
  double coef = 1.0;
  std::string kind;
  std::string body;
};

std::vector<std::string> split_terms(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const bool exponent_sign = i >= 2 && i < s.size() && (s[i - 1] == 'e' || s[i - 1] == 'E') &&
                               (std::isdigit(static_cast<unsigned char>(s[i - 2])) || s[i - 2] == '.');
    if (i == s.size() || (s[i] == '+' && !exponent_sign)) {
      out.push_back(detail::trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

Term parse_term(const std::string& text) {
  if (text.empty()) throw ParseError("empty term");
  Term t;
  std::string rest = text;
  const auto star = rest.find('*');
  if (star != std::string::npos) {
    t.coef = detail::parse_real(rest.substr(0, star));
    rest = detail::trim(rest.substr(star + 1));
  }
  const auto colon = rest.find(':');
  t.kind = detail::trim(rest.substr(0, colon));
  t.body = colon == std::string::npos ? "" : detail::trim(rest.substr(colon + 1));
  return t;
}

std::vector<double> parse_list(const std::string& s, char sep) {
  std::vector<double> out;
  for (const auto& item : detail::split(s, sep)) out.push_back(detail::parse_real(item));
  return out;
}

/// Splits known `key=value` options off a Cantor rule body.
struct CantorOptions {
  CantorSpec spec;
  std::map<std::string, std::string> opts;
};

CantorOptions parse_cantor_body(const std::string& body, const std::vector<std::string>& keys) {
  CantorOptions out;
  std::string rule;
  for (const auto& item : detail::split(body, ',')) {
    const auto eq = item.find('=');
    const std::string key = eq == std::string::npos ? "" : detail::trim(item.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
      out.opts[key] = detail::trim(item.substr(eq + 1));
    } else {
      if (!rule.empty()) rule += ',';
      rule += item;
    }
  }
  out.spec = parse_cantor_spec(rule);
  return out;
}

double opt_real(const std::map<std::string, std::string>& m, const std::string& key, double dflt) {
  auto it = m.find(key);
  return it == m.end() ? dflt : detail::parse_real(it->second);
}

}  // namespace

Premeasure parse_premeasure(std::string_view spec) {
  const std::string text = detail::trim(spec);
  if (text.empty()) throw ParseError("empty premeasure spec");
  std::vector<Term> terms;
  for (const auto& s : split_terms(text)) terms.push_back(parse_term(s));
  const bool literal =
      std::any_of(terms.begin(), terms.end(), [](const Term& t) { return t.kind == "lebesgue"; });

  std::vector<Component> parts;
  for (const auto& t : terms) {
    if (t.kind == "zero") {
      if (!t.body.empty()) throw ParseError("zero takes no arguments");
    } else if (t.kind == "lebesgue") {
      parts.push_back(component::Lebesgue{t.coef * detail::parse_real(t.body)});
    } else if (t.kind == "atom") {
      const auto f = detail::split(t.body, ',');
      if (f.size() != 2) throw ParseError("atom needs <angle>,<mass>");
      const Turn at = parse_angle(f[0]).wrapped();
      const double w = t.coef * detail::parse_real(f[1]);
      if (literal) {
        parts.push_back(component::Atom{at, at.to_double(), w});
      } else {
        parts.push_back(component::Lebesgue{w});
        parts.push_back(component::Atom{at, at.to_double(), -w});
      }
    } else if (t.kind == "cantor") {
      auto c = parse_cantor_body(t.body, {"n", "offset", "width"});
      component::Cantor comp;
      comp.spec = c.spec;
      comp.offset = opt_real(c.opts, "offset", 0.0);
      comp.width = opt_real(c.opts, "width", 1.0);
      comp.stages = static_cast<int>(c.opts.count("n") ? detail::parse_int(c.opts["n"]) : 0);
      if (comp.stages < 0 || comp.stages > CantorSpec::kStages) throw ParseError("Cantor stage out of range");
      if (!(comp.width > 0 && comp.offset >= 0 && comp.offset + comp.width <= 1)) {
        throw ParseError("Cantor placement must lie in [0,1]");
      }
      comp.coef = literal ? t.coef : -t.coef;
      if (!literal) parts.push_back(component::Lebesgue{t.coef});
      parts.push_back(comp);
    } else if (t.kind == "example2") {
      const auto kv = detail::parse_kv(t.body);
      Example2Spec es;
      for (const auto& [k, v] : kv) {
        if (k == "alpha0") {
          es.alpha0 = detail::parse_real(v);
        } else if (k == "K") {
          es.K = static_cast<int>(detail::parse_int(v));
        } else {
          throw ParseError("unknown example2 parameter '" + k + "'");
        }
      }
      try {
        auto b = example2_build(es);
        parts.push_back(component::Example2{b.data, t.coef});
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
    } else if (t.kind == "trig") {
      component::Trig tr;
      for (const auto& [k, v] : detail::parse_kv(t.body)) {
        if (k.size() < 2 || (k[0] != 'c' && k[0] != 's')) throw ParseError("trig keys are c<n> or s<n>");
        const long long n = detail::parse_int(k.substr(1));
        if (n < 1 || n > 4096) throw ParseError("trig frequency out of range");
        auto& vec = k[0] == 'c' ? tr.a : tr.b;
        if (static_cast<long long>(vec.size()) < n) vec.resize(n, 0.0);
        vec[n - 1] = t.coef * detail::parse_real(v);
      }
      const auto n = std::max(tr.a.size(), tr.b.size());
      tr.a.resize(n, 0.0);
      tr.b.resize(n, 0.0);
      parts.push_back(tr);
    } else if (t.kind == "step") {
      const auto kv = detail::parse_kv(t.body);
      if (!kv.count("breaks") || !kv.count("values") || kv.size() != 2) {
        throw ParseError("step needs breaks=<b0;...>,values=<v0;...>");
      }
      component::Step st;
      st.breaks = parse_list(kv.at("breaks"), ';');
      st.values = parse_list(kv.at("values"), ';');
      if (st.breaks.size() != st.values.size() + 1) throw ParseError("step needs one more break than values");
      for (std::size_t i = 0; i + 1 < st.breaks.size(); ++i) {
        if (!(st.breaks[i] < st.breaks[i + 1])) throw ParseError("step breaks must increase");
      }
      if (st.breaks.front() < 0 || st.breaks.back() > 1) throw ParseError("step breaks must lie in [0,1]");
      for (double& v : st.values) v *= t.coef;
      parts.push_back(st);
    } else {
      throw ParseError("unknown premeasure term '" + t.kind + "'");
    }
  }
  try {
    return Premeasure::make(std::move(parts), text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("premeasure spec '") + text + "': " + e.what());
  }
}

CarlesonSet parse_set(std::string_view spec) {
  const std::string text = detail::trim(spec);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("set spec needs <kind>:<args>");
  const std::string kind = text.substr(0, colon);
  const std::string body = detail::trim(text.substr(colon + 1));
  try {
    if (kind == "points") {
      std::vector<Turn> pts;
      for (const auto& item : detail::split(body, ',')) pts.push_back(parse_angle(item).wrapped());
      return CarlesonSet::points(pts);
    }
    if (kind == "arcs") {
      std::vector<Arc> arcs;
      for (const auto& item : detail::split(body, ';')) arcs.push_back(parse_arc(item));
      return CarlesonSet::from_components(std::move(arcs));
    }
    if (kind == "cantor-stage") {
      auto c = parse_cantor_body(body, {"n"});
      if (!c.opts.count("n")) throw ParseError("cantor-stage needs n=<int>");
      return CarlesonSet::cantor_stage(c.spec, static_cast<int>(detail::parse_int(c.opts["n"])));
    }
    if (kind == "cantor") {
      auto c = parse_cantor_body(body, {"offset", "width", "stages"});
      const double offset = opt_real(c.opts, "offset", 0.0);
      const double width = opt_real(c.opts, "width", 1.0);
      const int stages = static_cast<int>(c.opts.count("stages") ? detail::parse_int(c.opts["stages"])
                                                                 : CarlesonSet::kDefaultCensusStages);
      return CarlesonSet::cantor_limit(c.spec, offset, width, stages);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("set spec '") + text + "': " + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(std::string("set spec '") + text + "': " + e.what());
  }
  throw ParseError("unknown set kind '" + kind + "'");
}

}  // namespace korenblum
