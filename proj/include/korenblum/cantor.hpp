#pragma once

#include "korenblum/circle.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace korenblum {

enum class CantorRule { Linear, Example1, List };

/// Generalized Cantor construction: at stage k every kept interval is cut
/// into 2^(m_k+1) equal pieces and the 0-based even pieces are kept.
///
/// Stage data are precomputed for `kStages` stages. m_k for the Example-1
/// rule is rounded from binary64, so it is exact only below 2^53 and a
/// deterministic integer above.
class CantorSpec {
 public:
  static constexpr int kStages = 256;

  /// m_k = k.
  static CantorSpec linear();
  /// m_k = max(1, round(2^(k/alpha0) k^(-2/alpha0))).
  static CantorSpec example1(double alpha0);
  /// Explicit m_1, m_2, ...; the last entry repeats beyond the list.
  static CantorSpec list(std::vector<BigInt> m);

  CantorRule rule() const { return rule_; }
  double alpha0() const { return alpha0_; }
  const std::string& id() const { return id_; }

  /// k >= 1.
  const BigInt& m(int k) const;
  /// M_k = m_1 + ... + m_k, M_0 = 0.
  const BigInt& M(int k) const;
  double m_double(int k) const;
  double M_double(int k) const;

  /// Distribution function of the canonical probability measure on [0,1]:
  /// F(x) = mu~([0,x)). `max_stages` > 0 truncates to the measure
  /// equidistributed on the stage-n kept set.
  double cdf(double x, int max_stages = 0) const;
  /// Centroid of the normalized measure on a single stage-(k-1) kept piece,
  /// relative to that piece (in [0,1)).
  double tail_centroid(int k) const;

  /// max_k M_k/m_k over k <= n.
  double max_M_over_m(int n) const;

 private:
  struct Data {
    std::vector<BigInt> m, M;
    std::vector<double> m_d, M_d;
    std::vector<int> bits;  // m_k + 1 saturated for digit recursion
    std::vector<double> centroid;
  };
  static CantorSpec build(CantorRule rule, double alpha0, std::string id,
                          const std::vector<BigInt>& m);

  CantorRule rule_ = CantorRule::Linear;
  double alpha0_ = 0.0;
  std::string id_;
  std::shared_ptr<const Data> data_;
};

/// `mk=k` | `ex1,alpha0=<r>` | `list=<m1;m2;...>` (also `list=m1,m2,...`).
CantorSpec parse_cantor_spec(std::string_view text);

/// Stage-k census in exact log2 accounting.
struct StageCensus {
  int k = 0;
  BigInt m;
  BigInt M;
  /// Number of stage-k gaps is 2^gap_count_log2.
  BigInt gap_count_log2;
  /// Each stage-k gap has length 2^gap_len_log2.
  BigInt gap_len_log2;
  /// Total length of stage-k gaps, 2^-k.
  double gap_measure = 0.0;
};

std::vector<StageCensus> cantor_census(const CantorSpec& spec, int n);

struct CantorStage {
  int n = 0;
  /// Closed kept arcs at stage n, by start.
  std::vector<Arc> kept;
  /// Open gap arcs of stages 1..n, by start.
  std::vector<Arc> gaps;
  std::vector<StageCensus> census;
};

inline constexpr int kMaxEnumerationLog2 = 20;

/// Explicit enumeration; ResolutionError when 2^M_n exceeds 2^20.
CantorStage cantor_stage(const CantorSpec& spec, int n);

}  // namespace korenblum
