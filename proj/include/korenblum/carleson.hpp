#pragma once

#include "korenblum/cantor.hpp"
#include "korenblum/circle.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/premeasure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace korenblum {

/// One complementary arc, or one Cantor stage of 2^count_log2 equal arcs.
struct GapEntry {
  BigInt count_log2 = 0;
  /// Arc length is 2^len_log2 * exp(log_scale).
  BigInt len_log2 = 0;
  double log_scale = 0.0;
  /// Census stage (0 for an explicit arc).
  int stage = 0;
  std::optional<Arc> arc;

  double log_length() const;
  /// log of count * length.
  double log_total() const;
  double total_length() const;
};

/// Closed set given through its complementary arcs.
///
/// Explicit sets hold finitely many closed components (points or closed
/// arcs). Lazy Cantor sets hold the stage census of a Cantor construction
/// placed on [offset, offset + width); their complementary arcs are the
/// census gaps, i.e. the set is E together with the junction points between
/// adjacent gaps.
class CarlesonSet {
 public:
  static constexpr int kDefaultCensusStages = 60;

  static CarlesonSet from_components(std::vector<Arc> closed);
  static CarlesonSet points(const std::vector<Turn>& at);
  /// Closure of the stage-n kept set (explicit enumeration).
  static CarlesonSet cantor_stage(const CantorSpec& spec, int n);
  static CarlesonSet cantor_limit(const CantorSpec& spec, double offset = 0.0, double width = 1.0,
                                  int stages = kDefaultCensusStages);

  bool lazy() const { return lazy_; }
  const std::string& id() const { return id_; }
  /// Explicit sets only.
  const std::vector<Arc>& components() const;
  /// Complementary arcs (explicit) or census stages (lazy), by decreasing
  /// length, ties by start angle.
  const std::vector<GapEntry>& gap_entries() const { return entries_; }
  double complementary_length() const;

  const std::optional<CantorSpec>& cantor() const { return spec_; }
  double offset() const { return offset_; }
  double width() const { return width_; }

 private:
  bool lazy_ = false;
  std::string id_;
  std::vector<Arc> components_;
  std::vector<GapEntry> entries_;
  std::optional<CantorSpec> spec_;
  double offset_ = 0.0;
  double width_ = 1.0;
};

struct EntropyResult {
  double partial_sum = 0.0;
  std::optional<double> tail_bound;
  int terms_used = 0;
  std::vector<double> terms;
};

/// Entr_Lambda over the n_terms largest complementary entries.
EntropyResult entropy(const CarlesonSet& F, const Majorant& lambda, int n_terms);

struct EntropySeriesRow {
  int k = 0;
  BigInt m;
  BigInt M;
  double term = 0.0;
  double partial_sum = 0.0;
};

struct EntropySeries {
  std::vector<EntropySeriesRow> rows;
  /// k0^2 term_{k0}, k0 = ceil(n/2).
  double envelope = 0.0;
  /// term_k <= envelope k^-2 for every k in [k0, n].
  bool converges = false;
  /// Last 5 terms increasing with term ratio > 1.05.
  bool diverges = false;
  double last_ratio = 0.0;
};

inline constexpr double kDivergenceRatio = 1.05;
inline constexpr int kDivergenceWindow = 5;

/// Terms 2^-k Lambda(2^-(k+M_k)), evaluated through u = (k+M_k) log 2.
EntropySeries cantor_entropy_series(const CantorSpec& spec, const Majorant& lambda, int n_max);

/// Closed delta-neighbourhood of an explicit set; `delta` in radians.
/// Merged disjoint closed arcs, or {full}.
std::vector<Arc> neighborhood(const CarlesonSet& F, double delta);

/// max of mu([a, a+t)) over a on the 2^-resolution grid.
double modulus_of_continuity(const Premeasure& mu, double t, int resolution);

struct OmegaRow {
  double t = 0.0;
  double omega = 0.0;
  double ratio = 0.0;
};

struct OmegaBoundReport {
  std::vector<OmegaRow> rows;
  double max_ratio = 0.0;
  /// R_j = 2^j / Lambda(2^-(j+M_j)), j = 1..60: the ratio at kept-piece lengths.
  std::vector<double> stage_ratio;
  double structural_bound = 0.0;
  bool stage_ratio_decreasing = false;
  bool bounded = false;
};

/// omega(t) / (t Lambda(t)) for the canonical Cantor measure at dyadic
/// t = 2^-1 .. 2^-min_log2, on a 2^-resolution grid.
OmegaBoundReport cantor_omega_bound(const CantorSpec& spec, const Majorant& lambda,
                                    int min_log2 = 20, int resolution = 22);

}  // namespace korenblum
