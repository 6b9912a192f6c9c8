#pragma once

#include "korenblum/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

namespace korenblum {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_subdivisions = 1 << 18;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int panels = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1,1] (positive half, centre last).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
QuadratureResult<T> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T k = fc * kWgk[7];
  T g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    k += (f1 + f2) * kWgk[i];
    if (i % 2 == 1) g += (f1 + f2) * kWg[i / 2];
  }
  QuadratureResult<T> r;
  r.value = k * h;
  r.error = std::abs(static_cast<T>((k - g) * h));
  r.panels = 1;
  return r;
}

}  // namespace detail

/// Globally adaptive G7-K15 over consecutive breakpoints (sorted, at least two).
template <class T, class F>
QuadratureResult<T> integrate(F&& f, std::vector<double> breaks, const QuadratureOptions& opt) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.size() < 2) return {};
  struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::priority_queue<Panel> heap;
  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto r = detail::gk15<T>(f, breaks[i], breaks[i + 1]);
    heap.push({breaks[i], breaks[i + 1], r.value, r.error});
    total += r.value;
    err += r.error;
  }
  int panels = static_cast<int>(heap.size());
  int since_resum = 0;
  while (err > opt.abs_tol) {
    if (panels >= opt.max_subdivisions) {
      throw NumericError("quadrature did not reach tolerance within " +
                         std::to_string(opt.max_subdivisions) + " panels");
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      throw NumericError("quadrature panel collapsed below binary64 resolution");
    }
    auto l = detail::gk15<T>(f, p.a, m);
    auto r = detail::gk15<T>(f, m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push({p.a, m, l.value, l.error});
    heap.push({m, p.b, r.value, r.error});
    ++panels;
    // Running sums drift; refresh them from the heap now and then.
    if (++since_resum == 4096) {
      since_resum = 0;
      auto copy = heap;
      total = T{};
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  // Final sum in ascending-position order for reproducibility.
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult<T> out;
  out.panels = panels;
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

}  // namespace korenblum
