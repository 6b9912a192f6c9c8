#include "korenblum/circle.hpp"

#include "korenblum/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

Rational floor_rational(const Rational& x) {
  BigInt n = boost::multiprecision::numerator(x);
  BigInt d = boost::multiprecision::denominator(x);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return Rational(q);
}

Rational wrap01(const Rational& x) { return x - floor_rational(x); }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

Rational parse_decimal(const std::string& s) {
  // [-]digits[.digits][e[+-]digits], parsed exactly.
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  BigInt mant = 0;
  int scale = 0;
  bool any = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    mant = mant * 10 + (s[i] - '0');
    any = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      mant = mant * 10 + (s[i] - '0');
      --scale;
      any = true;
    }
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      eneg = s[i] == '-';
      ++i;
    }
    int e = 0;
    bool edig = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      e = e * 10 + (s[i] - '0');
      edig = true;
      if (e > 10000) throw ParseError("exponent too large in '" + s + "'");
    }
    if (!edig) throw ParseError("bad exponent in '" + s + "'");
    scale += eneg ? -e : e;
  }
  if (!any || i != s.size()) throw ParseError("not a number: '" + s + "'");
  Rational r(mant);
  BigInt p = boost::multiprecision::pow(BigInt(10), std::abs(scale));
  r = scale >= 0 ? r * Rational(p) : r / Rational(p);
  return neg ? -r : r;
}

}  // namespace

Turn Turn::from_double(double turns) {
  if (!std::isfinite(turns)) throw std::domain_error("non-finite angle");
  if (turns == 0.0) return Turn();
  int exp = 0;
  double frac = std::frexp(turns, &exp);  // turns = frac * 2^exp, |frac| in [0.5,1)
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  exp -= 53;
  Rational r{BigInt(mant)};
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << (-exp));
  }
  return Turn(r);
}

Turn Turn::from_radians(double radians) {
  return from_double(radians / (2.0 * std::numbers::pi));
}

Turn Turn::wrapped() const { return Turn(wrap01(value_)); }

std::string Turn::str() const {
  std::ostringstream os;
  os << value_;
  return os.str();
}

Arc::Arc(ArcKind kind, Turn start, Rational length)
    : kind_(kind), start_(std::move(start)), length_(std::move(length)) {}

Arc Arc::empty() { return Arc(ArcKind::Empty, Turn(), Rational(0)); }
Arc Arc::full() { return Arc(ArcKind::Full, Turn(), Rational(1)); }
Arc Arc::point(const Turn& at) { return Arc(ArcKind::Point, at.wrapped(), Rational(0)); }

Arc Arc::with_length(ArcKind kind, const Turn& start, const Rational& len) {
  if (len < 0 || len > 1) throw std::invalid_argument("arc length outside [0,1]");
  switch (kind) {
    case ArcKind::Empty:
      return empty();
    case ArcKind::Full:
      return full();
    case ArcKind::Point:
      return point(start);
    default:
      break;
  }
  if (len == 0) return kind == ArcKind::Closed ? point(start) : empty();
  if (len == 1 && kind != ArcKind::Open) return full();
  return Arc(kind, start.wrapped(), len);
}

Arc Arc::make(ArcKind kind, const Turn& start, const Turn& end) {
  if (kind == ArcKind::Empty) return empty();
  if (kind == ArcKind::Full) return full();
  if (kind == ArcKind::Point) return point(start);
  Rational len = wrap01(end.value() - start.value());
  if (len == 0 && !(end == start && kind == ArcKind::Closed)) len = 1;
  if (len == 0) return point(start);
  return with_length(kind, start, len);
}

bool Arc::includes_start() const {
  return kind_ == ArcKind::RightOpen || kind_ == ArcKind::Closed || kind_ == ArcKind::Point ||
         kind_ == ArcKind::Full;
}

bool Arc::includes_end() const {
  return kind_ == ArcKind::LeftOpen || kind_ == ArcKind::Closed || kind_ == ArcKind::Point ||
         kind_ == ArcKind::Full;
}

Arc Arc::complement() const {
  const Turn e = end().wrapped();
  const Rational rest = 1 - length_;
  switch (kind_) {
    case ArcKind::Empty:
      return full();
    case ArcKind::Full:
      return empty();
    case ArcKind::Point:
      return Arc(ArcKind::Open, start_, Rational(1));
    case ArcKind::Open:
      if (length_ == 1) return point(start_);
      return Arc(ArcKind::Closed, e, rest);
    case ArcKind::Closed:
      return Arc(ArcKind::Open, e, rest);
    case ArcKind::RightOpen:
      return Arc(ArcKind::RightOpen, e, rest);
    case ArcKind::LeftOpen:
      return Arc(ArcKind::LeftOpen, e, rest);
  }
  return empty();
}

bool Arc::contains(const Turn& angle) const {
  if (kind_ == ArcKind::Empty) return false;
  if (kind_ == ArcKind::Full) return true;
  const Rational d = wrap01(angle.value() - start_.value());
  switch (kind_) {
    case ArcKind::Point:
      return d == 0;
    case ArcKind::Open:
      return d > 0 && d < length_;
    case ArcKind::Closed:
      return d <= length_;
    case ArcKind::RightOpen:
      return d < length_;
    case ArcKind::LeftOpen:
      return d > 0 && d <= length_;
    default:
      return false;
  }
}

std::string Arc::str() const {
  switch (kind_) {
    case ArcKind::Empty:
      return "empty";
    case ArcKind::Full:
      return "full";
    case ArcKind::Point:
      return "point:" + start_.str();
    default:
      break;
  }
  const std::string a = start_.str();
  const std::string b = end().str();
  const char* l = (kind_ == ArcKind::RightOpen || kind_ == ArcKind::Closed) ? "[" : "(";
  const char* r = (kind_ == ArcKind::LeftOpen || kind_ == ArcKind::Closed) ? "]" : ")";
  return l + a + "," + b + r;
}

double length(const Arc& arc) { return static_cast<double>(arc.exact_length()); }

Arc GridArc::arc() const {
  if (N <= 0 || k < 0 || l <= k || l - k > N) throw std::invalid_argument("bad grid arc");
  return Arc::with_length(ArcKind::RightOpen, Turn(k, N), Rational(l - k, N));
}

bool is_simple_covering(const std::vector<Arc>& arcs) {
  if (arcs.empty()) return false;
  if (arcs.size() == 1) return arcs.front().kind() == ArcKind::Full;
  std::vector<const Arc*> sorted;
  Rational total = 0;
  for (const Arc& a : arcs) {
    if (a.kind() != ArcKind::RightOpen) return false;
    total += a.exact_length();
    sorted.push_back(&a);
  }
  if (total != 1) return false;
  std::sort(sorted.begin(), sorted.end(),
            [](const Arc* x, const Arc* y) { return x->start() < y->start(); });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Arc& cur = *sorted[i];
    const Arc& next = *sorted[(i + 1) % sorted.size()];
    if (!(cur.end().wrapped() == next.start())) return false;
  }
  return true;
}

SimpleCovering::SimpleCovering(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  if (!is_simple_covering(arcs_)) throw std::invalid_argument("not a simple covering");
}

Rational SimpleCovering::total_length() const {
  Rational sum = 0;
  for (const Arc& a : arcs_) sum += a.exact_length();
  return sum;
}

Turn parse_angle(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty angle");
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "rad") == 0) {
    const std::string num = trim(s.substr(0, s.size() - 3));
    const Rational r = parse_decimal(num);
    return Turn::from_radians(static_cast<double>(r));
  }
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Rational p = parse_decimal(trim(s.substr(0, slash)));
    const Rational q = parse_decimal(trim(s.substr(slash + 1)));
    if (q == 0) throw ParseError("zero denominator in angle '" + s + "'");
    return Turn(p / q);
  }
  return Turn(parse_decimal(s));
}

Arc parse_arc(std::string_view text) {
  const std::string s = trim(text);
  if (s == "full") return Arc::full();
  if (s == "empty") return Arc::empty();
  if (s.rfind("point:", 0) == 0) return Arc::point(parse_angle(s.substr(6)));
  if (s.size() < 5) throw ParseError("bad arc '" + s + "'");
  const char l = s.front();
  const char r = s.back();
  if ((l != '[' && l != '(') || (r != ']' && r != ')')) throw ParseError("bad arc '" + s + "'");
  const std::string body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos) throw ParseError("bad arc '" + s + "'");
  const Turn a = parse_angle(body.substr(0, comma));
  const Turn b = parse_angle(body.substr(comma + 1));
  ArcKind kind = ArcKind::Open;
  if (l == '[' && r == ')') kind = ArcKind::RightOpen;
  if (l == '(' && r == ']') kind = ArcKind::LeftOpen;
  if (l == '[' && r == ']') kind = ArcKind::Closed;
  return Arc::make(kind, a, b);
}

}  // namespace korenblum
