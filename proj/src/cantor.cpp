#include "korenblum/cantor.hpp"

#include "korenblum/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

// Exact integer value of a finite, integral binary64.
BigInt bigint_from_double(double v) {
  if (!(v >= 0) || std::isinf(v)) throw std::invalid_argument("m_k overflowed binary64");
  int e = 0;
  const double mant = std::frexp(v, &e);
  // v = mant * 2^e with 0.5 <= mant < 1; scale mantissa to a 53-bit integer.
  const auto bits = static_cast<long long>(std::ldexp(mant, 53));
  BigInt r = bits;
  if (e >= 53) {
    r <<= (e - 53);
  } else {
    r >>= (53 - e);
  }
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

CantorSpec CantorSpec::build(CantorRule rule, double alpha0, std::string id,
                             const std::vector<BigInt>& m) {
  auto data = std::make_shared<Data>();
  data->m.reserve(kStages + 1);
  data->m.push_back(0);
  data->M.push_back(0);
  data->m_d.push_back(0);
  data->M_d.push_back(0);
  data->bits.push_back(0);
  for (int k = 1; k <= kStages; ++k) {
    BigInt mk = m[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(m.size())) - 1)];
    if (mk < 1) throw std::invalid_argument("m_k must be >= 1");
    data->M.push_back(data->M.back() + mk);
    data->m_d.push_back(static_cast<double>(mk));
    data->M_d.push_back(static_cast<double>(data->M.back()));
    data->bits.push_back(mk >= 2000 ? 2000 : static_cast<int>(mk) + 1);
    data->m.push_back(std::move(mk));
  }
  data->centroid.assign(kStages + 2, 0.5);
  for (int k = kStages; k >= 1; --k) {
    data->centroid[k] = 0.5 - std::ldexp(1.0 - data->centroid[k + 1], -data->bits[k]);
  }
  CantorSpec s;
  s.rule_ = rule;
  s.alpha0_ = alpha0;
  s.id_ = std::move(id);
  s.data_ = std::move(data);
  return s;
}

CantorSpec CantorSpec::linear() {
  std::vector<BigInt> m;
  for (int k = 1; k <= kStages; ++k) m.emplace_back(k);
  return build(CantorRule::Linear, 0.0, "mk=k", m);
}

CantorSpec CantorSpec::example1(double alpha0) {
  if (!(alpha0 > 0 && alpha0 < 1)) throw std::invalid_argument("alpha0 must lie in (0,1)");
  std::vector<BigInt> m;
  for (int k = 1; k <= kStages; ++k) {
    const double raw = std::exp2(k / alpha0) * std::pow(static_cast<double>(k), -2.0 / alpha0);
    m.push_back(bigint_from_double(std::max(1.0, std::round(raw))));
  }
  return build(CantorRule::Example1, alpha0, "ex1,alpha0=" + fmt(alpha0), m);
}

CantorSpec CantorSpec::list(std::vector<BigInt> m) {
  if (m.empty()) throw std::invalid_argument("empty m_k list");
  std::string id = "list=";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) id += ';';
    id += m[i].str();
  }
  return build(CantorRule::List, 0.0, id, m);
}

const BigInt& CantorSpec::m(int k) const {
  if (k < 1 || k > kStages) throw std::out_of_range("Cantor stage out of range");
  return data_->m[k];
}

const BigInt& CantorSpec::M(int k) const {
  if (k < 0 || k > kStages) throw std::out_of_range("Cantor stage out of range");
  return data_->M[k];
}

double CantorSpec::m_double(int k) const {
  if (k < 1 || k > kStages) throw std::out_of_range("Cantor stage out of range");
  return data_->m_d[k];
}

double CantorSpec::M_double(int k) const {
  if (k < 0 || k > kStages) throw std::out_of_range("Cantor stage out of range");
  return data_->M_d[k];
}

double CantorSpec::tail_centroid(int k) const {
  if (k < 1) throw std::out_of_range("Cantor stage out of range");
  if (k > kStages) return 0.5;
  return data_->centroid[k];
}

double CantorSpec::max_M_over_m(int n) const {
  double r = 0;
  for (int k = 1; k <= std::min(n, kStages); ++k) r = std::max(r, data_->M_d[k] / data_->m_d[k]);
  return r;
}

double CantorSpec::cdf(double x, int max_stages) const {
  if (!(x > 0)) return 0.0;
  if (x >= 1) return 1.0;
  const auto& bits = data_->bits;
  double acc = 0.0;
  double w = 1.0;
  const int last = max_stages > 0 ? std::min(max_stages, kStages) : kStages;
  for (int k = 1; k <= last; ++k) {
    const int s = bits[k];
    if (s > 1100) return acc + w * x;
    const double y = std::ldexp(x, s);
    const double j = std::floor(y);
    const double frac = y - j;
    const int m = s - 1;
    if (std::fmod(j, 2.0) != 0.0) {
      // In a gap: all kept pieces up to j-1 are complete.
      return acc + w * std::ldexp((j + 1) / 2, -m);
    }
    acc += w * std::ldexp(j / 2, -m);
    w = std::ldexp(w, -m);
    x = frac;
    if (x == 0.0 || w < 1e-300) return acc;
  }
  return acc + w * x;
}

CantorSpec parse_cantor_spec(std::string_view text) {
  const std::string s = detail::trim(text);
  if (s == "mk=k") return CantorSpec::linear();
  if (s.rfind("list=", 0) == 0) {
    std::string body = s.substr(5);
    std::replace(body.begin(), body.end(), ';', ',');
    std::vector<BigInt> m;
    for (const auto& item : detail::split(body, ',')) {
      const long long v = detail::parse_int(item);
      if (v < 1) throw ParseError("Cantor m_k must be >= 1");
      m.emplace_back(v);
    }
    if (m.empty()) throw ParseError("empty Cantor list");
    return CantorSpec::list(std::move(m));
  }
  if (s.rfind("ex1", 0) == 0) {
    const auto kv = detail::parse_kv(s);
    double alpha0 = 0.5;
    for (const auto& [key, value] : kv) {
      if (key == "ex1") continue;
      if (key != "alpha0") throw ParseError("unknown Cantor parameter '" + key + "'");
      alpha0 = detail::parse_real(value);
    }
    if (!(alpha0 > 0 && alpha0 < 1)) throw ParseError("alpha0 must lie in (0,1)");
    return CantorSpec::example1(alpha0);
  }
  throw ParseError("unknown Cantor rule '" + s + "'");
}

std::vector<StageCensus> cantor_census(const CantorSpec& spec, int n) {
  if (n < 1 || n > CantorSpec::kStages) throw std::out_of_range("Cantor stage out of range");
  std::vector<StageCensus> out;
  out.reserve(n);
  for (int k = 1; k <= n; ++k) {
    StageCensus c;
    c.k = k;
    c.m = spec.m(k);
    c.M = spec.M(k);
    c.gap_count_log2 = c.M;
    c.gap_len_log2 = -(BigInt(k) + c.M);
    c.gap_measure = std::ldexp(1.0, -k);
    out.push_back(std::move(c));
  }
  return out;
}

CantorStage cantor_stage(const CantorSpec& spec, int n) {
  if (n < 1) throw std::out_of_range("Cantor stage must be >= 1");
  if (spec.M(n) > kMaxEnumerationLog2) {
    throw ResolutionError("explicit Cantor enumeration needs 2^" + spec.M(n).str() +
                          " arcs; cap is 2^" + std::to_string(kMaxEnumerationLog2));
  }
  CantorStage out;
  out.n = n;
  out.census = cantor_census(spec, n);
  std::vector<Rational> starts{Rational(0)};
  Rational len(1);
  for (int k = 1; k <= n; ++k) {
    const int m = static_cast<int>(spec.m(k));
    const Rational piece = len / Rational(BigInt(1) << (m + 1));
    std::vector<Rational> next;
    next.reserve(starts.size() << m);
    for (const Rational& a : starts) {
      for (int i = 0; i < (1 << m); ++i) {
        const Rational p0 = a + piece * (2 * i);
        next.push_back(p0);
        out.gaps.push_back(Arc::with_length(ArcKind::Open, Turn(p0 + piece), piece));
      }
    }
    starts = std::move(next);
    len = piece;
  }
  out.kept.reserve(starts.size());
  for (const Rational& a : starts) out.kept.push_back(Arc::with_length(ArcKind::Closed, Turn(a), len));
  std::sort(out.gaps.begin(), out.gaps.end(),
            [](const Arc& a, const Arc& b) { return a.start() < b.start(); });
  return out;
}

}  // namespace korenblum
