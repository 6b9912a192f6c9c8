#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace korenblum {

enum class MajorantFamily { LogPower, LogLog, Tabulated, Custom };

/// An admissible weight Lambda on (0,1].
///
/// Values are available both in terms of t and in terms of u = log(1/t); the
/// log form is what Cantor-stage and growth-class computations use, since the
/// lengths they need (2^-(k+M_k) with M_k in the thousands) underflow binary64.
class Majorant {
 public:
  /// (c + log(1/t))^p. A negative `shift` selects the default max(2, p+1).
  static Majorant log_power(double p, double shift = -1.0);
  /// log(c + log(1/t)). A negative `shift` selects the default e^2.
  static Majorant log_log(double shift = -1.0);
  /// Two-column table (t, Lambda(t)) with strictly decreasing t; interpolated
  /// linearly in log(1/t).
  static Majorant tabulated(std::vector<double> t, std::vector<double> values);
  static Majorant tabulated_from_file(const std::string& path);
  static Majorant custom(std::string id, std::function<double(double)> of_t,
                         double witness_alpha, double doubling_C);

  /// Lambda(t) for 0 < t <= 1; throws std::domain_error outside.
  double operator()(double t) const { return eval(t); }
  double eval(double t) const;
  /// Lambda(exp(-u)) for u >= 0.
  double eval_log(double u) const;

  MajorantFamily family() const { return family_; }
  double exponent() const { return p_; }
  double shift() const { return c_; }
  double witness_alpha() const { return witness_alpha_; }
  double doubling_C() const { return doubling_C_; }
  /// Canonical spec string, e.g. `logpow:p=0.5,c=2`.
  const std::string& id() const { return id_; }
  /// Largest u supported (infinite for closed-form families).
  double max_log() const;

 private:
  MajorantFamily family_ = MajorantFamily::LogPower;
  double p_ = 1.0;
  double c_ = 2.0;
  double witness_alpha_ = 0.5;
  double doubling_C_ = 2.0;
  std::string id_;
  std::shared_ptr<const std::vector<double>> table_u_;
  std::shared_ptr<const std::vector<double>> table_v_;
  std::function<double(double)> custom_;
};

/// `logpow:p=<r>[,c=<r>]` | `loglog[:c=<r>]` | `table:<path>`.
Majorant parse_majorant(std::string_view spec);

struct AxiomCheck {
  std::string name;
  bool passed = false;
  /// Smallest value of the quantity required to be >= 0 (or > 0 for positivity).
  double margin = 0.0;
  /// Grid index of the worst point.
  int worst_index = 0;
};

struct AdmissibilityReport {
  std::vector<AxiomCheck> checks;
  double witness_alpha = 0.0;
  double doubling_C = 0.0;
  double measured_doubling = 0.0;
  int grid_points = 0;
  bool passed() const;
  const AxiomCheck& check(std::string_view name) const;
};

inline constexpr double kAxiomTolerance = 1e-12;

/// Grid verification of the majorant axioms on t_j = 2^-j, j = 0..grid_size.
AdmissibilityReport admissible(const Majorant& lambda, int grid_size = 64);

enum class GrowthTag { C1, C2, Neither };

std::string to_string(GrowthTag tag);

struct GrowthClass {
  GrowthTag tag = GrowthTag::Neither;
  /// Per tested c: min over tail chords of log(phi(x2)) - log(chord(x2)),
  /// phi(x) = exp(c Lambda(1/x)). Non-negative means concave on the tail.
  std::vector<std::pair<double, double>> concavity_margins;
  /// (u, Lambda/log(e/t)) over the tail.
  std::vector<std::pair<double, double>> ratio_samples;
  bool c1 = false;
  bool c2 = false;
};

inline constexpr double kC2RatioThreshold = 10.0;
inline constexpr int kGrowthTailPoints = 8;

/// Default tail grid in the log domain: u_j = 2^j, j = 1..48.
std::vector<double> default_tail_log_grid();
std::vector<double> default_c_samples();

/// Grid-certified (heuristic) classification against the growth conditions.
/// `tail_log_grid` holds u = log(1/t), strictly increasing (t decreasing to 0).
GrowthClass classify_growth(const Majorant& lambda, const std::vector<double>& c_samples,
                            const std::vector<double>& tail_log_grid);

}  // namespace korenblum
