#pragma once

#include "hamlab/bigcount.hpp"
#include "hamlab/factor.hpp"
#include "hamlab/graph.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace hamlab {

/// Caps for the exponential counters. Memory at the cap:
///  - hamilton_dp 24: 2^23 * 23 * 8 B = 1.5 GiB of path counts, plus the same
///    again for the floating shadow used when n >= 22.
///  - matching_dp 24: 2^24 * 8 B = 128 MiB.
///  - permanent 30: O(n) memory, 2^30 Gray-code steps.
///  - enumeration 12: backtracking, memory O(n).
struct CounterCaps {
  int hamilton_dp = 24;
  int hamilton_bruteforce = 10;
  int matching_dp = 24;
  int permanent = 30;
  int enumeration = 12;
};

inline constexpr CounterCaps kDefaultCaps{};

/// f(G,s) / f'(G,s) indexed by cycle count s.
struct FactorCensus {
  std::map<int, BigCount> by_cycles;
  int isolated_budget = 0;

  BigCount total() const;
  /// Sum over 1 <= s <= max_cycles.
  BigCount total_up_to(int max_cycles) const;
  BigCount at(int s) const;
};

/// h(G) by subset DP anchored at vertex 0.
BigCount count_hamilton_cycles(const Graph& g, const CounterCaps& caps = kDefaultCaps);
/// Permutation enumeration; the test oracle for the DP.
BigCount count_hamilton_cycles_bruteforce(const Graph& g, const CounterCaps& caps = kDefaultCaps);

/// Square matrix, row-major, nonnegative entries.
struct Matrix {
  int n = 0;
  std::vector<std::int64_t> entries;

  std::int64_t at(int r, int c) const { return entries[static_cast<std::size_t>(r) * n + c]; }
  static Matrix identity(int n);
  static Matrix ones(int n);
  static Matrix adjacency(const OrientedGraph& d);
};

/// Ryser's formula over Gray-coded column subsets.
BigCount permanent(const Matrix& a, const CounterCaps& caps = kDefaultCaps);

/// Cycle covers of d on >= n - allow_missing vertices, keyed by cycle count.
/// The empty cover (only when allow_missing >= n) is recorded under s = 0.
FactorCensus count_one_factors(const OrientedGraph& d, int allow_missing, const CounterCaps& caps = kDefaultCaps);

/// Vertex-disjoint cycle collections leaving <= allow_isolated vertices
/// uncovered, keyed by cycle count (s = 0 for the all-isolated factor).
FactorCensus count_two_factors(const Graph& g, int allow_isolated, const CounterCaps& caps = kDefaultCaps);

/// Visits every factor counted by count_two_factors, each exactly once.
void enumerate_two_factors(const Graph& g, int allow_isolated, const std::function<void(const Factor&)>& visit,
                           const CounterCaps& caps = kDefaultCaps);

/// m(G).
BigCount count_perfect_matchings(const Graph& g, const CounterCaps& caps = kDefaultCaps);

// ---------------------------------------------------------------------------
// Closed-form evaluators. All work in log space; `value` is exp(log) and may
// be +inf for huge arguments.

struct LogValue {
  double log = 0.0;
  double value = 0.0;
  static LogValue from_log(double l);
};

/// (n-1)! p^n / 2.
LogValue expected_hamilton(int n, double p);
/// (n'-1)! (ln n')^(s-1) p^n' / ((s-1)! 2^s).
LogValue kko_factor_bound(int n_prime, double p, int s);

struct VdwBound {
  LogValue exact;  // d^n n! / n^n
  LogValue weak;   // (d/e)^n
};
VdwBound vdw_lower_bound(int d_reg, int n);

struct FormulaInputs {
  int n = 0;
  double p = 0.0;
  double np = 0.0;
  double r = 0.0;       // np/2, half-degree of a random orientation
  double d = 0.0;       // np - 100 np / ln ln n
  double s_star = 0.0;  // n / (ln n sqrt(ln ln n))
  double k = 0.0;       // 17 s* ln n / ln(np)
  std::optional<int> t0;  // smallest t with (np/3000)^(t-1) >= 1/p
  double rotation_budget = 0.0;  // 3 ln n / ln(np)
  double endpoint_target = 0.0;  // n / 3000
  int isolated_budget = 0;
};

/// Throws DomainError for n < 16 or np <= 1.
FormulaInputs formula_inputs(int n, double p);

/// max(1, floor(s*(n))) with s* evaluated whenever ln ln n > 0, else 1.
int clamped_s_star(int n);

/// census_total / (C(n,k) (max_degree+1)^(2k)).
LogValue double_count_lower_bound(const BigCount& census_total, int n, int k, int max_degree);

}  // namespace hamlab
