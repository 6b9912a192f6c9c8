#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace korenblum {

/// Exact angle, stored as a fraction of a full turn.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class Turn {
 public:
  Turn() = default;
  explicit Turn(Rational value) : value_(std::move(value)) {}
  Turn(std::int64_t num, std::int64_t den) : value_(Rational(num, den)) {}

  /// Lossless embedding of a binary64 fraction of a turn.
  static Turn from_double(double turns);
  static Turn from_radians(double radians);

  const Rational& value() const { return value_; }
  double to_double() const { return static_cast<double>(value_); }

  /// Reduced into [0,1).
  Turn wrapped() const;

  friend Turn operator+(const Turn& a, const Turn& b) { return Turn(a.value_ + b.value_); }
  friend Turn operator-(const Turn& a, const Turn& b) { return Turn(a.value_ - b.value_); }
  friend bool operator==(const Turn& a, const Turn& b) { return a.value_ == b.value_; }
  friend bool operator<(const Turn& a, const Turn& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Turn& a, const Turn& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Turn& a, const Turn& b) { return a.value_ > b.value_; }

  std::string str() const;

 private:
  Rational value_{0};
};

enum class ArcKind {
  Empty,
  Point,
  Open,        // (a,b)
  LeftOpen,    // (a,b]
  RightOpen,   // [a,b)
  Closed,      // [a,b]
  Full,
};

/// An arc of the unit circle: the set of angles from `start` going
/// counter-clockwise for `length` turns, endpoints included per `kind`.
/// Arcs crossing angle 0 are ordinary arcs (start + length > 1).
class Arc {
 public:
  static Arc empty();
  static Arc full();
  static Arc point(const Turn& at);
  /// Arc from `start` to `end` counter-clockwise; `end <= start` wraps.
  static Arc make(ArcKind kind, const Turn& start, const Turn& end);
  static Arc with_length(ArcKind kind, const Turn& start, const Rational& length);

  ArcKind kind() const { return kind_; }
  const Turn& start() const { return start_; }
  /// Exact normalized length in [0,1].
  const Rational& exact_length() const { return length_; }
  /// Unwrapped end: start + length, may exceed 1.
  Turn end() const { return Turn(start_.value() + length_); }
  bool wraps() const { return start_.value() + length_ > 1; }

  bool includes_start() const;
  bool includes_end() const;

  Arc complement() const;
  /// Exact membership test.
  bool contains(const Turn& angle) const;

  std::string str() const;

  friend bool operator==(const Arc& a, const Arc& b) {
    return a.kind_ == b.kind_ && a.start_ == b.start_ && a.length_ == b.length_;
  }

 private:
  Arc(ArcKind kind, Turn start, Rational length);
  ArcKind kind_ = ArcKind::Empty;
  Turn start_;
  Rational length_{0};
};

double length(const Arc& arc);

/// Grid arc I_{k,l} = [k/N, l/N) of a uniform N-point grid.
struct GridArc {
  std::int64_t N = 1;
  std::int64_t k = 0;
  std::int64_t l = 1;

  Arc arc() const;
  double length() const { return static_cast<double>(l - k) / static_cast<double>(N); }
};

/// Disjoint half-open arcs tiling the circle.
class SimpleCovering {
 public:
  /// Throws std::invalid_argument unless `arcs` is a simple covering.
  explicit SimpleCovering(std::vector<Arc> arcs);
  const std::vector<Arc>& arcs() const { return arcs_; }
  Rational total_length() const;

 private:
  std::vector<Arc> arcs_;
};

bool is_simple_covering(const std::vector<Arc>& arcs);

/// Angle syntax: `1/4`, `0.25` (fractions of a turn), `1.5rad`.
Turn parse_angle(std::string_view text);
/// Arc syntax: `[a,b)`, `(a,b)`, `[a,b]`, `(a,b]`, `point:a`, `full`, `empty`.
Arc parse_arc(std::string_view text);

}  // namespace korenblum
