#pragma once

#include "korenblum/cantor.hpp"
#include "korenblum/circle.hpp"
#include "korenblum/majorant.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace korenblum {

/// Block data of the Example-2 construction: block k is
/// [start[k-1], start[k]) of length u[k-1] and carries
/// (v_k/u_k) m - v_k (Cantor copy).
struct Example2Data {
  double alpha0 = 0.5;
  int K = 0;
  int index_shift = 15;
  CantorSpec base;
  std::vector<double> u;
  std::vector<double> v;
  /// Prefix sums, start[0] = 0 and start[K] = 1.
  std::vector<double> start;
  /// Normalizer of the truncated rule (sum of the raw weights over k <= K).
  double normalizer = 1.0;
  /// |1 - sum u_k| after normalization.
  double deficit = 0.0;
  /// Mass the same raw weights would leave beyond K, relative to the
  /// normalizer (how far the truncation is from the untruncated rule).
  double untruncated_tail = 0.0;
};

namespace component {

struct Lebesgue {
  double scale = 0.0;
};

struct Atom {
  Turn position;
  double pos = 0.0;
  double mass = 0.0;
};

/// g(t) = sum_n a_n cos(2 pi n t) + b_n sin(2 pi n t), n >= 1; mean zero.
struct Trig {
  std::vector<double> a;
  std::vector<double> b;
};

/// Piecewise-constant density: values[i] on [breaks[i], breaks[i+1]).
struct Step {
  std::vector<double> breaks;
  std::vector<double> values;
};

/// coef times the canonical Cantor probability measure, placed on
/// [offset, offset + width).
struct Cantor {
  CantorSpec spec;
  double coef = 0.0;
  double offset = 0.0;
  double width = 1.0;
  /// > 0: equidistributed on the stage-n kept set instead of the limit.
  int stages = 0;
};

struct Example2 {
  std::shared_ptr<const Example2Data> data;
  double scale = 1.0;
};

}  // namespace component

using Component = std::variant<component::Lebesgue, component::Atom, component::Trig,
                               component::Step, component::Cantor, component::Example2>;

/// Additive arc function given by its left-continuous distribution
/// mu_hat(t) = mu([0,t)), angles in turns.
class Premeasure {
 public:
  static constexpr double kBalanceTolerance = 1e-12;

  Premeasure() = default;
  /// Rejects (std::invalid_argument) unless mu(T) = 0.
  static Premeasure make(std::vector<Component> parts, std::string id = "");
  /// Component-level arc function; total mass unconstrained.
  static Premeasure raw(std::vector<Component> parts, std::string id = "");
  static Premeasure zero();

  const std::vector<Component>& components() const { return parts_; }
  const std::string& id() const { return id_; }
  double total() const { return total_; }
  bool balanced() const { return balanced_; }

  /// mu([0,t)) for t in [0,1]; mu_hat(1) = mu(T).
  double mu_hat(double t) const;
  double mu_hat(const Turn& t) const;
  /// Mass of atoms at angle a.
  double jump(double a) const;
  double eval(const Arc& arc) const;
  /// mu([a, a+len)) with a in [0,1), 0 <= len <= 1.
  double eval_half_open(double a, double len) const;

  /// Merged atom table (position, mass) sorted by position.
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }

  Premeasure scaled(double c) const;

 private:
  Premeasure(std::vector<Component> parts, std::string id);
  std::vector<Component> parts_;
  std::string id_ = "zero";
  std::vector<std::pair<double, double>> atoms_;
  double total_ = 0.0;
  bool balanced_ = true;
};

/// Component-wise sum a*mu1 + b*mu2 with like terms merged.
Premeasure combine(double a, const Premeasure& mu1, double b, const Premeasure& mu2);

/// Contribution of one component to mu([0,t)).
double component_cdf(const Component& c, double t);
double component_total(const Component& c);

struct NormEstimate {
  double lower_bound = 0.0;
  std::optional<double> certified_upper;
  int search_depth = 0;
  /// Length of the arc attaining lower_bound.
  double attained_length = 0.0;
};

/// mu_hat on the grid j/2^depth, j = 0..2^depth.
std::vector<double> mu_hat_grid(const Premeasure& mu, int depth);

/// Dyadic-arc search (all 4^depth arcs, wrapping included) plus arcs with an
/// endpoint at an atom.
NormEstimate norm_plus(const Premeasure& mu, const Majorant& lambda, int depth);
/// Structural bound sum over components; nullopt when some component is not
/// Lambda-bounded from above.
std::optional<double> certified_norm_upper(const Premeasure& mu, const Majorant& lambda);

struct WeakConvergenceReport {
  std::vector<double> norm_lower;        // per sequence element
  double sup_norm_lower = 0.0;
  std::vector<std::vector<double>> diff;  // [n][sample] |mu_hat_n - mu_hat|
  std::vector<double> max_diff;           // per n
  bool diffs_non_increasing = false;
};

WeakConvergenceReport weak_convergence_check(const std::vector<Premeasure>& seq,
                                             const Premeasure& mu, const Majorant& lambda,
                                             const std::vector<Turn>& theta_samples,
                                             int depth = 8);

}  // namespace korenblum
