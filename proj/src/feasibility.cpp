#include "korenblum/feasibility.hpp"

#include "korenblum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace korenblum {

namespace {

struct Best {
  double value;
  int k;
};

inline void relax(Best& best, double v, int k) {
  if (v < best.value || (v == best.value && k < best.k)) best = {v, k};
}

Arc grid_arc(int N, int k, int l) {
  return Arc::make(ArcKind::RightOpen, Turn(k, N), Turn(l, N));
}

SimpleCovering to_covering(int N, const std::vector<std::pair<int, int>>& cells) {
  std::vector<Arc> arcs;
  for (const auto& [k, l] : cells) arcs.push_back(grid_arc(N, k, l));
  return SimpleCovering(std::move(arcs));
}

// `low` holds labels from a virtual source with 0-edges to every node: the
// greatest potentials with P <= P_0. They are preferred as the witness when
// they close the cycle, so a table with b >= 0 gets P = 0.
void finish(const BTable& b, const std::vector<double>& d, const std::vector<double>& low,
            const std::vector<int>& pred, FeasibilityReport& r) {
  const int N = b.N();
  r.N = N;
  r.params = b.params();
  if (d[N] < -kNegativeMargin) {
    std::vector<std::pair<int, int>> cells;
    for (int l = N; l > 0; l = pred[l]) cells.emplace_back(pred[l], l);
    std::reverse(cells.begin(), cells.end());
    r.covering_sum = covering_sum(b, cells);
    if (r.covering_sum < -kNegativeMargin) {
      r.feasible = false;
      r.violating_covering = to_covering(N, cells);
      r.covering_cells = std::move(cells);
      return;
    }
  }
  r.feasible = true;
  if (low[N] >= -kNegativeMargin) {
    r.potentials.assign(low.begin(), low.end());
  } else {
    r.potentials.assign(d.begin(), d.end());
  }
  r.potentials[N] = r.potentials[0];
  r.witness.resize(N);
  for (int s = 0; s < N; ++s) {
    r.witness[s] = r.potentials[s + 1] - r.potentials[s];
    if (!b.is_dense()) r.witness[s] -= b.mu(s, s + 1);
  }
}

}  // namespace

BTable BTable::from_premeasure(const Premeasure& mu, const Majorant& lambda, int N, double C,
                               double eps, double M) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (!(C > 0 && eps > 0 && M > 0)) throw std::invalid_argument("C, eps, M must be positive");
  BTable t;
  t.N_ = N;
  t.params_ = {C, eps, M, lambda.id(), mu.id()};
  auto prefix = std::make_shared<std::vector<double>>(N + 1);
  auto weight = std::make_shared<std::vector<double>>(N + 1, 0.0);
  (*prefix)[0] = 0.0;
#pragma omp parallel for schedule(static)
  for (int j = 1; j < N; ++j) (*prefix)[j] = mu.mu_hat(static_cast<double>(j) / N);
  (*prefix)[N] = mu.total();
  for (int L = 1; L <= N; ++L) {
    const double len = static_cast<double>(L) / N;
    (*weight)[L] = len * lambda(len);
  }
  t.prefix_ = std::move(prefix);
  t.weight_ = std::move(weight);
  return t;
}

BTable BTable::dense(int N, std::vector<double> values) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (values.size() != static_cast<std::size_t>(N + 1) * (N + 1)) {
    throw std::invalid_argument("dense b-table needs (N+1)^2 entries");
  }
  BTable t;
  t.N_ = N;
  t.dense_ = true;
  t.params_.mu_id = "dense";
  t.values_ = std::make_shared<const std::vector<double>>(std::move(values));
  return t;
}

BTable BTable::rebind(double C, double eps, double M) const {
  if (dense_) throw std::logic_error("dense b-tables have no parameters");
  if (!(C > 0 && eps > 0 && M > 0)) throw std::invalid_argument("C, eps, M must be positive");
  BTable t = *this;
  t.params_.C = C;
  t.params_.eps = eps;
  t.params_.M = M;
  return t;
}

double covering_sum(const BTable& b, const std::vector<std::pair<int, int>>& cells) {
  double s = 0.0;
  for (const auto& [k, l] : cells) s += b(k, l);
  return s;
}

double witness_min_slack(const BTable& b, const std::vector<double>& P) {
  const int N = b.N();
  if (P.size() != static_cast<std::size_t>(N + 1)) throw std::invalid_argument("need N+1 potentials");
  double slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < N; ++k) {
    for (int l = k + 1; l <= N; ++l) slack = std::min(slack, b(k, l) - (P[l] - P[k]));
  }
  return slack;
}

FeasibilityReport feasible_negcycle_serial(const BTable& b) {
  const int N = b.N();
  std::vector<double> d(N + 1, 0.0), low(N + 1, 0.0);
  std::vector<int> pred(N + 1, 0);
  for (int l = 1; l <= N; ++l) {
    Best best{std::numeric_limits<double>::infinity(), 0};
    double lo = 0.0;
    for (int k = 0; k < l; ++k) {
      const double w = b(k, l);
      relax(best, d[k] + w, k);
      lo = std::min(lo, low[k] + w);
    }
    d[l] = best.value;
    low[l] = lo;
    pred[l] = best.k;
  }
  FeasibilityReport r;
  finish(b, d, low, pred, r);
  return r;
}

FeasibilityReport feasible_negcycle(const BTable& b) {
  constexpr int kParallelFrom = 1024;
  const int N = b.N();
  std::vector<double> d(N + 1, 0.0), low(N + 1, 0.0);
  std::vector<int> pred(N + 1, 0);
  for (int l = 1; l <= N; ++l) {
    Best best{std::numeric_limits<double>::infinity(), 0};
    double lo = 0.0;
    if (l < kParallelFrom) {
      for (int k = 0; k < l; ++k) {
        const double w = b(k, l);
        relax(best, d[k] + w, k);
        lo = std::min(lo, low[k] + w);
      }
    } else {
#pragma omp parallel
      {
        Best local{std::numeric_limits<double>::infinity(), 0};
        double local_lo = 0.0;
#pragma omp for schedule(static) nowait
        for (int k = 0; k < l; ++k) {
          const double w = b(k, l);
          relax(local, d[k] + w, k);
          local_lo = std::min(local_lo, low[k] + w);
        }
#pragma omp critical(korenblum_negcycle)
        {
          relax(best, local.value, local.k);
          lo = std::min(lo, local_lo);
        }
      }
    }
    d[l] = best.value;
    low[l] = lo;
    pred[l] = best.k;
  }
  FeasibilityReport r;
  finish(b, d, low, pred, r);
  return r;
}

FeasibilityReport feasible_bruteforce(const BTable& b) {
  const int N = b.N();
  if (N > kBruteForceMaxN) {
    throw ResolutionError("brute-force covering enumeration supports N <= " +
                          std::to_string(kBruteForceMaxN));
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  const std::uint32_t masks = 1u << (N - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    // Bit j-1 set: cut at grid point j.
    double s = 0.0;
    int prev = 0;
    for (int j = 1; j <= N; ++j) {
      if (j == N || (mask >> (j - 1) & 1u)) {
        s += b(prev, j);
        prev = j;
      }
    }
    if (s < best) {
      best = s;
      best_mask = mask;
    }
  }
  FeasibilityReport r;
  r.N = N;
  r.params = b.params();
  r.min_covering_sum = best;
  if (best < -kNegativeMargin) {
    std::vector<std::pair<int, int>> cells;
    int prev = 0;
    for (int j = 1; j <= N; ++j) {
      if (j == N || (best_mask >> (j - 1) & 1u)) {
        cells.emplace_back(prev, j);
        prev = j;
      }
    }
    r.feasible = false;
    r.covering_sum = covering_sum(b, cells);
    r.violating_covering = to_covering(N, cells);
    r.covering_cells = std::move(cells);
  }
  return r;
}

ProbeSchedule default_probe_schedule(int max_log2N) {
  ProbeSchedule s;
  for (int j = 0; j <= 12; ++j) s.eps.push_back(std::ldexp(1.0, -j));
  s.M_factors = {4.0, 16.0, 64.0};
  for (int j = 1; j <= max_log2N; ++j) s.N.push_back(1 << j);
  return s;
}

double default_probe_C(const Premeasure& mu, const Majorant& lambda, int depth) {
  return std::max(4.0 * norm_plus(mu, lambda, depth).lower_bound, 1e-9);
}

ProbeReport abs_continuity_probe(const Premeasure& mu, const Majorant& lambda, double C,
                                 const ProbeSchedule& schedule) {
  if (schedule.eps.empty() || schedule.M_factors.empty() || schedule.N.empty()) {
    throw std::invalid_argument("probe schedules must be non-empty");
  }
  if (!(C > 0)) throw std::invalid_argument("C must be positive");
  ProbeReport rep;
  rep.C = C;
  for (double e : schedule.eps) {
    for (double f : schedule.M_factors) rep.cells.push_back({e, f * C, 0, std::nullopt, std::nullopt});
  }
  std::vector<int> Ns = schedule.N;
  std::sort(Ns.begin(), Ns.end());
  for (int N : Ns) {
    const BTable base = BTable::from_premeasure(mu, lambda, N, C, 1.0, 1.0);
    for (auto& cell : rep.cells) {
      if (cell.first_infeasible_N) continue;
      cell.largest_N = N;
      FeasibilityReport fr = feasible_negcycle(base.rebind(C, cell.eps, cell.M));
      if (!fr.feasible) {
        cell.first_infeasible_N = N;
        cell.obstruction = std::move(fr);
      }
    }
  }
  const std::size_t nm = schedule.M_factors.size();
  for (std::size_t i = 0; i < schedule.eps.size() && !rep.obstruction; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < nm; ++j) all = all && rep.cells[i * nm + j].first_infeasible_N.has_value();
    if (all) {
      rep.obstruction = true;
      rep.obstruction_eps = schedule.eps[i];
      rep.witness_cell = rep.cells[i * nm + nm - 1];
    }
  }
  std::ostringstream os;
  os.precision(6);
  if (rep.obstruction) {
    const auto& w = *rep.witness_cell;
    os << "obstruction at (eps=" << w.eps << ", M=" << w.M << ", N=" << *w.first_infeasible_N
       << ") with covering sum " << w.obstruction->covering_sum;
  } else {
    os << "no obstruction found up to N=" << Ns.back() << " (inconclusive)";
  }
  rep.summary = os.str();
  return rep;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BTable random_btable(int N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  std::mt19937_64 rng(seed);
  const auto n1 = static_cast<std::size_t>(N) + 1;
  std::vector<double> v(n1 * n1, 0.0);
  for (int k = 0; k < N; ++k) {
    for (int l = k + 1; l <= N; ++l) {
      // 53 random bits; avoids the library-specific distribution code.
      const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
      v[k * n1 + l] = 0.25 * (l - k) / N + (u - 0.5) * 2.0 / N;
    }
  }
  return BTable::dense(N, std::move(v));
}

OracleSummary oracle_equivalence(int N, int trials, std::uint64_t seed) {
  if (N < 2 || N > kBruteForceMaxN) throw std::invalid_argument("oracle N out of range");
  OracleSummary s;
  s.N = N;
  s.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t seed_i =
        splitmix64(seed ^ (static_cast<std::uint64_t>(N) << 32) ^ static_cast<std::uint64_t>(i));
    const auto b = random_btable(N, seed_i);
    const bool fast = feasible_negcycle(b).feasible;
    const auto brute = feasible_bruteforce(b);
    const bool slow = brute.feasible;
    s.log.push_back({i, seed_i, fast, slow, brute.min_covering_sum.value_or(0.0)});
    if (fast == slow) {
      ++s.agreements;
    } else {
      s.disagreements.push_back(i);
    }
    if (!slow) ++s.infeasible;
  }
  return s;
}

}  // namespace korenblum
