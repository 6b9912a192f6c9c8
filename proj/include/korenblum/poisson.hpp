#pragma once

#include "korenblum/circle.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/premeasure.hpp"
#include "korenblum/quadrature.hpp"

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace korenblum {

using Complex = std::complex<double>;

inline constexpr double kMaxRadius = 0.9999;

/// Integral of g over [0,1) against mu, component by component:
/// absolutely continuous parts by adaptive G7-K15 against their density,
/// atoms exactly, Cantor-type parts by adaptive refinement of the
/// construction tree. `peaks` are angles (turns) where g concentrates, with
/// width scale `peak_width`.
double integrate_against(const Premeasure& mu, const std::function<double(double)>& g,
                         const std::vector<double>& peaks, double peak_width,
                         const QuadratureOptions& opt);
Complex integrate_against(const Premeasure& mu, const std::function<Complex(double)>& g,
                          const std::vector<double>& peaks, double peak_width,
                          const QuadratureOptions& opt);

/// Integral of f over [0,1) against mu by parts against mu_hat:
/// f(1) mu_hat(1) - int_0^1 f'(t) mu_hat(t) dt. Angles in turns.
double stieltjes_integral(const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime, const Premeasure& mu,
                          const QuadratureOptions& opt = {});

/// Poisson kernel (1 - r^2) / |e^{2 pi i t} - z|^2.
double poisson_kernel(Complex z, double t);
/// d/dt of the Poisson kernel.
double poisson_kernel_dt(Complex z, double t);
/// (e + z)/(e - z), e = e^{2 pi i t}.
Complex herglotz_kernel(Complex z, double t);

struct PoissonOptions {
  QuadratureOptions quadrature{1e-10, 1 << 18};
};

class PoissonField {
 public:
  explicit PoissonField(Premeasure source, PoissonOptions opt = {});

  const Premeasure& source() const { return *source_; }
  const PoissonOptions& options() const { return opt_; }
  /// P[mu](z), |z| <= 0.9999; NumericError beyond or on quadrature failure.
  double operator()(Complex z) const;

 private:
  std::shared_ptr<const Premeasure> source_;
  PoissonOptions opt_;
  struct Cache {
    std::mutex lock;
    std::map<std::pair<double, double>, double> values;
  };
  std::shared_ptr<Cache> cache_;
};

double poisson_eval(const PoissonField& field, Complex z);

/// Tolerance widened by max(1, 1e-3 (1+r)/(1-r)) for radius r.
QuadratureOptions scaled_options(QuadratureOptions opt, double r);

/// Radius check shared by the field evaluators.
void check_radius(Complex z);

struct GrowthBoundRow {
  double r = 0.0;
  double theta = 0.0;  // turns
  double value = 0.0;
  double ratio = 0.0;
};

struct GrowthBoundReport {
  std::vector<GrowthBoundRow> rows;
  double norm = 0.0;
  double max_ratio = 0.0;
  bool passed = false;
};

inline constexpr double kPoissonBoundConstant = 10.0;

/// max of P[mu](z) / (norm Lambda(1-|z|)) over radii x equispaced angles.
GrowthBoundReport growth_bound_check(const PoissonField& field, const Majorant& lambda,
                                     const NormEstimate& norm, const std::vector<double>& radii,
                                     int angles);

struct RecoveryRow {
  double r = 0.0;
  double value = 0.0;
};

/// int_I h(r e^{2 pi i t}) dt for each r (normalized arc length).
std::vector<RecoveryRow> recover_premeasure(const std::function<double(Complex)>& h, const Arc& I,
                                            const std::vector<double>& r_schedule,
                                            const QuadratureOptions& opt = {1e-9, 1 << 16});

/// Same quantity for h = P[mu] after exchanging the integrals: the arc
/// integral of the Poisson kernel has the closed form
/// (1/pi) atan((1+r)/(1-r) tan(pi s)), leaving one integral against mu.
std::vector<RecoveryRow> recover_poisson(const Premeasure& mu, const Arc& I,
                                         const std::vector<double>& r_schedule,
                                         const QuadratureOptions& opt = {1e-11, 1 << 18});

/// Harmonic measure of the arc [a, a+len) seen from r e^{2 pi i s}.
double arc_harmonic_measure(double r, double s, double a, double len);

}  // namespace korenblum
