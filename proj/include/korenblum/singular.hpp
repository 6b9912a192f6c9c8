#pragma once

#include "korenblum/carleson.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/premeasure.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace korenblum {

enum class SingularMethod { Series, DeltaLimit };

std::string to_string(SingularMethod m);

struct SingularPartResult {
  double value = 0.0;
  SingularMethod method = SingularMethod::Series;
  int terms_used = 0;
  std::optional<double> tail_bound;
  /// (delta in radians, mu(F^delta)), delta decreasing.
  std::vector<std::pair<double, double>> delta_trace;
  /// |mu(F^delta) - value| non-increasing along the trace (delta method).
  bool trace_monotone = true;
};

/// mu of all arcs in one complementary entry. Lazy census stages are
/// supported for components with a known gap mass (Lebesgue, the Cantor
/// component the set was built from, Example-2 blocks, components with
/// disjoint support); otherwise nullopt.
std::optional<double> entry_mass(const Premeasure& mu, const CarlesonSet& F, const GapEntry& e);

/// -sum mu(I_n) over the n_terms largest complementary entries. With a norm
/// value, the tail bound is norm * (entropy tail).
SingularPartResult singular_part_series(const Premeasure& mu, const CarlesonSet& F, int n_terms,
                                        const Majorant* lambda = nullptr,
                                        std::optional<double> norm = std::nullopt);

/// mu(F^delta) along a decreasing schedule (radians); value is the last one.
SingularPartResult singular_part_delta(const Premeasure& mu, const CarlesonSet& F,
                                       const std::vector<double>& delta_schedule);

struct NonpositivityReport {
  SingularPartResult series;
  double entropy = 0.0;
  double norm = 0.0;
  bool norm_certified = false;
  bool sign_ok = false;
  bool entropy_bound_ok = false;
  double tolerance = 1e-9;
};

NonpositivityReport nonpositivity_check(const Premeasure& mu, const CarlesonSet& F,
                                        const Majorant& lambda, int n_terms = 1 << 20,
                                        int norm_depth = 10);

}  // namespace korenblum
