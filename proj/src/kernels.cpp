#include "korenblum/kernels.hpp"

#include <limits>
#include <stdexcept>

namespace korenblum::kernels {

namespace {

inline double arc_value(const std::vector<double>& G, std::size_t n, std::size_t j, std::size_t L) {
  return j + L <= n ? G[j + L] - G[j] : G[n] - G[j] + G[j + L - n];
}

inline bool better(const ArcMax& a, const ArcMax& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.start != b.start) return a.start < b.start;
  return a.length < b.length;
}

void check_sizes(const std::vector<double>& G, const std::vector<double>& w) {
  if (G.size() < 2 || w.size() != G.size()) throw std::invalid_argument("grid/weight size mismatch");
}

}  // namespace

ArcMax dyadic_ratio_max_serial(const std::vector<double>& G, const std::vector<double>& w) {
  check_sizes(G, w);
  const std::size_t n = G.size() - 1;
  ArcMax best{-std::numeric_limits<double>::infinity(), 0, 1};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t L = 1; L <= n; ++L) {
      const double r = arc_value(G, n, j, L) / w[L];
      if (r > best.value) best = {r, j, L};
    }
  }
  return best;
}

ArcMax dyadic_ratio_max_parallel(const std::vector<double>& G, const std::vector<double>& w) {
  check_sizes(G, w);
  const std::size_t n = G.size() - 1;
  ArcMax best{-std::numeric_limits<double>::infinity(), 0, 1};
#pragma omp parallel
  {
    ArcMax local{-std::numeric_limits<double>::infinity(), 0, 1};
#pragma omp for schedule(static) nowait
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t L = 1; L <= n; ++L) {
        const double r = arc_value(G, n, j, L) / w[L];
        if (r > local.value) local = {r, j, L};
      }
    }
#pragma omp critical(korenblum_ratio_max)
    if (better(local, best)) best = local;
  }
  return best;
}

double window_max_serial(const std::vector<double>& G, std::size_t L) {
  const std::size_t n = G.size() - 1;
  if (L < 1 || L > n) throw std::invalid_argument("window length outside [1,n]");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double v = arc_value(G, n, j, L);
    if (v > best) best = v;
  }
  return best;
}

double window_max_parallel(const std::vector<double>& G, std::size_t L) {
  const std::size_t n = G.size() - 1;
  if (L < 1 || L > n) throw std::invalid_argument("window length outside [1,n]");
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::size_t j = 0; j < n; ++j) {
    const double v = arc_value(G, n, j, L);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace korenblum::kernels
