#pragma once

#include "korenblum/circle.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/premeasure.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace korenblum {

struct BParams {
  double C = 0.0;
  double eps = 0.0;
  double M = 0.0;
  std::string lambda_id;
  std::string mu_id;
};

/// b_{k,l} for the grid arcs I_{k,l} = [k/N, l/N), 0 <= k < l <= N.
///
/// Premeasure tables are computed on demand from mu_hat at the grid points
/// and one weight per arc length, so N = 2^14 needs O(N) memory. Dense
/// tables store every entry (used for random tests).
class BTable {
 public:
  static BTable from_premeasure(const Premeasure& mu, const Majorant& lambda, int N, double C,
                                double eps, double M);
  /// `values` is (N+1)x(N+1) row-major; only k < l is read.
  static BTable dense(int N, std::vector<double> values);
  /// Same premeasure grid with new (C, eps, M).
  BTable rebind(double C, double eps, double M) const;

  int N() const { return N_; }
  const BParams& params() const { return params_; }

  double operator()(int k, int l) const {
    if (dense_) return (*values_)[static_cast<std::size_t>(k) * (N_ + 1) + l];
    const double w = (*weight_)[l - k];
    const double x = (*prefix_)[l] - (*prefix_)[k] + params_.M * w;
    const double y = params_.C * w;
    const double m = x < y ? x : y;
    return m < params_.eps ? m : params_.eps;
  }

  /// |I|Lambda(|I|) for a premeasure table.
  double weight(int len) const { return weight_->at(len); }
  /// mu(I_{k,l}) for a premeasure table.
  double mu(int k, int l) const { return prefix_->at(l) - prefix_->at(k); }
  bool is_dense() const { return dense_; }

 private:
  int N_ = 0;
  bool dense_ = false;
  BParams params_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<double>> prefix_;
  std::shared_ptr<const std::vector<double>> weight_;
};

inline constexpr double kNegativeMargin = 1e-12;

struct FeasibilityReport {
  bool feasible = true;
  int N = 0;
  BParams params;
  /// Feasible: x_{s,s+1}, s = 0..N-1 (premeasure tables), and the potentials
  /// P_0..P_N with P_N = P_0 that satisfy P_l - P_k <= b_{k,l}.
  std::vector<double> witness;
  std::vector<double> potentials;
  /// Infeasible: a simple covering by grid arcs with negative b-sum.
  std::optional<SimpleCovering> violating_covering;
  std::vector<std::pair<int, int>> covering_cells;
  double covering_sum = 0.0;
  /// Minimum covering sum (brute force only).
  std::optional<double> min_covering_sum;
};

/// Shortest path 0 -> N in the arc DAG; every cycle through the identified
/// node N = 0 is a simple covering.
FeasibilityReport feasible_negcycle(const BTable& b);
FeasibilityReport feasible_negcycle_serial(const BTable& b);

inline constexpr int kBruteForceMaxN = 12;

/// Enumerates all 2^(N-1) coverings; ResolutionError for N > 12.
FeasibilityReport feasible_bruteforce(const BTable& b);

/// Re-evaluates every constraint; returns the smallest slack b - (P_l - P_k).
double witness_min_slack(const BTable& b, const std::vector<double>& potentials);
double covering_sum(const BTable& b, const std::vector<std::pair<int, int>>& cells);

/// Dense table with entries (l-k)/(4N) + U(-1/N, 1/N) drawn from mt19937_64(seed).
BTable random_btable(int N, std::uint64_t seed);

struct OracleTrial {
  int index = 0;
  std::uint64_t seed = 0;
  bool negcycle_feasible = true;
  bool bruteforce_feasible = true;
  double min_covering_sum = 0.0;
};

struct OracleSummary {
  int N = 0;
  int trials = 0;
  int agreements = 0;
  int infeasible = 0;
  /// Trial indices where the two methods disagree.
  std::vector<int> disagreements;
  std::vector<OracleTrial> log;
};

/// Negative-cycle vs brute-force verdicts on `trials` random tables; trial i
/// uses seed splitmix64(seed ^ (N << 32) ^ i).
OracleSummary oracle_equivalence(int N, int trials, std::uint64_t seed);

struct ProbeCell {
  double eps = 0.0;
  double M = 0.0;
  int largest_N = 0;
  std::optional<int> first_infeasible_N;
  std::optional<FeasibilityReport> obstruction;
};

struct ProbeReport {
  double C = 0.0;
  std::vector<ProbeCell> cells;  // eps-major, then M
  bool obstruction = false;
  /// Smallest-index eps for which every M has an infeasible N.
  std::optional<double> obstruction_eps;
  std::optional<ProbeCell> witness_cell;
  std::string summary;
};

struct ProbeSchedule {
  std::vector<double> eps;
  std::vector<double> M_factors;  // M = factor * C
  std::vector<int> N;
};

/// eps = 1, 1/2, ..., 2^-12; M = {4C, 16C, 64C}; N = 2, 4, ..., 2^max_log2N.
ProbeSchedule default_probe_schedule(int max_log2N = 14);
/// 4 * norm_plus(mu).lower_bound; at least a small positive floor.
double default_probe_C(const Premeasure& mu, const Majorant& lambda, int depth = 10);

/// Obstruction means: for some eps, every M in the schedule has an
/// infeasible N (the exists-eps / forall-M / exists-N pattern).
ProbeReport abs_continuity_probe(const Premeasure& mu, const Majorant& lambda, double C,
                                 const ProbeSchedule& schedule);

}  // namespace korenblum
