#pragma once

#include "korenblum/carleson.hpp"
#include "korenblum/feasibility.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/poisson.hpp"
#include "korenblum/premeasure.hpp"
#include "korenblum/singular.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace korenblum {

/// int (e+z)/(e-z) dmu over [0,1).
Complex herglotz_integral(const Premeasure& mu, Complex z, const QuadratureOptions& opt = {1e-10, 1 << 18});
/// f_mu(z) = exp(herglotz_integral).
Complex herglotz_eval(const Premeasure& mu, Complex z, const QuadratureOptions& opt = {1e-10, 1 << 18});
/// S(z) = exp(-int (e+z)/(e-z) dmu~) for a positive measure mu~ (raw premeasure).
Complex singular_inner(const Premeasure& positive, Complex z,
                       const QuadratureOptions& opt = {1e-10, 1 << 18});

struct TaylorReport {
  std::vector<double> coefficient_moduli;  // |a_n|, n = 0..n_max
  /// min C with |a_n| <= exp(C Lambda(1/n)) for 2 <= n <= n_max.
  double C = 0.0;
  int n_max = 0;
  double r = 0.0;
};

TaylorReport taylor_growth_check(const std::function<Complex(Complex)>& f, const Majorant& lambda,
                                 int n_max, double r);

struct Example1 {
  CantorSpec spec;
  Premeasure mu;        // m - mu~
  Premeasure positive;  // mu~
};

Example1 example1_build(double alpha0);

struct Example2Spec {
  double alpha0 = 0.5;
  int K = 64;
  /// Empty: default rule u_k proportional to 1/(n log n (log log n)^2), n = k + 15.
  std::vector<double> u;
};

struct Example2Build {
  std::shared_ptr<const Example2Data> data;
  Premeasure mu;
  /// min over k of v_k n log n log log n (n = k + 15); bounded below for the default rule.
  double v_growth_floor = 0.0;
};

Example2Build example2_build(const Example2Spec& spec);

enum class Verdict { Cyclic, NotCyclic, Inconclusive };
std::string to_string(Verdict v);

struct SingularCandidate {
  std::string set_id;
  std::string source;
  bool carleson_certified = false;
  std::optional<double> entropy;
  std::optional<SingularPartResult> result;
  std::string note;
};

struct VerdictConfig {
  int entropy_stages = 60;
  int norm_depth = 10;
  int probe_max_log2N = 12;
  bool run_probe = true;
  int omega_min_log2 = 20;
  int omega_resolution = 22;
  double tolerance = 1e-9;
};

struct VerdictReport {
  std::string majorant_id;
  std::string mu_id;
  GrowthClass growth;
  std::vector<SingularCandidate> candidates;
  std::vector<std::string> analytic_evidence;
  std::vector<std::string> computational_evidence;
  std::optional<ProbeReport> probe;
  Verdict verdict = Verdict::Inconclusive;
  /// analytic | computational | analytic+computational | none
  std::string grade = "none";
  bool truncated_construction = false;
  std::optional<double> alpha;
  std::vector<std::string> notes;
};

VerdictReport verdict(const Premeasure& mu, const Majorant& lambda, const VerdictConfig& cfg = {});

struct SweepReport {
  std::vector<VerdictReport> reports;
  /// Number of verdict changes along the sweep.
  int flips = 0;
  /// Exactly one change, from not-cyclic to cyclic.
  bool single_flip = false;
};

/// Verdicts for Lambda = logpow:p=alpha over the given alphas.
SweepReport alpha_sweep(const Premeasure& mu, const std::vector<double>& alphas,
                        const VerdictConfig& cfg = {});

}  // namespace korenblum
