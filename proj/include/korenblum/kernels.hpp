#pragma once

#include <cstddef>
#include <vector>

/// Hot loops in two forms: a plain serial reference and an OpenMP version
/// that must return bit-identical results (ties broken by the smallest index).
namespace korenblum::kernels {

struct ArcMax {
  double value = 0.0;
  std::size_t start = 0;
  std::size_t length = 0;
};

/// max over start j in [0,n) and length L in [1,n] of
/// (G[j+L] - G[j]) / w[L], wrapping through G[n] = mu(T).
/// `G` has n+1 entries, `w` has n+1 entries (w[0] unused).
ArcMax dyadic_ratio_max_serial(const std::vector<double>& G, const std::vector<double>& w);
ArcMax dyadic_ratio_max_parallel(const std::vector<double>& G, const std::vector<double>& w);

/// max over j in [0,n) of G[j+L] - G[j] (wrapping), L in [1,n].
double window_max_serial(const std::vector<double>& G, std::size_t L);
double window_max_parallel(const std::vector<double>& G, std::size_t L);

}  // namespace korenblum::kernels
