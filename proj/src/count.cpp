#include "hamlab/count.hpp"

#include "hamlab/error.hpp"
#include "hamlab/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace hamlab {

namespace {

void check_cap(int n, int cap, const char* what) {
  if (n > cap)
    throw CapacityError(std::string(what) + ": n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

std::uint64_t full_mask(int bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

// Directed Hamilton paths from vertex 0 ending next to it exceed 2^64 from
// here on; below it the wrapped DP is already exact.
constexpr int kShadowFromN = 22;

}  // namespace

BigCount FactorCensus::total() const {
  BigCount t;
  for (const auto& [s, c] : by_cycles) t += c;
  return t;
}

BigCount FactorCensus::total_up_to(int max_cycles) const {
  BigCount t;
  for (const auto& [s, c] : by_cycles)
    if (s >= 1 && s <= max_cycles) t += c;
  return t;
}

BigCount FactorCensus::at(int s) const {
  auto it = by_cycles.find(s);
  return it == by_cycles.end() ? BigCount{} : it->second;
}

BigCount count_hamilton_cycles(const Graph& g, const CounterCaps& caps) {
  const int n = g.n();
  check_cap(n, std::min(caps.hamilton_dp, 30), "count_hamilton_cycles");
  if (n < 3) return BigCount{};
  const auto& k = kernels::active();
  const int m = n - 1;  // vertices 1..n-1 become bit positions 0..m-1
  const std::uint64_t full = full_mask(m);
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(m));
  std::uint64_t start = 0;
  for (int i = 0; i < m; ++i) {
    adj[i] = (g.row_mask(i + 1) >> 1) & full;
    if (g.has_edge(0, i + 1)) start |= std::uint64_t{1} << i;
  }
  const std::size_t masks = std::size_t{1} << m;
  const auto width = static_cast<std::size_t>(m);
  // dp[mask * m + v]: paths from 0 through exactly `mask`, ending at v.
  std::vector<std::uint64_t> dp(masks * width, 0);
  const bool shadow = n >= kShadowFromN;
  std::vector<double> approx(shadow ? masks * width : 0, 0.0);
  for (int i = 0; i < m; ++i)
    if ((start >> i) & 1u) {
      dp[(std::size_t{1} << i) * width + i] = 1;
      if (shadow) approx[(std::size_t{1} << i) * width + i] = 1.0;
    }
  for (std::size_t mask = 1; mask < masks; ++mask) {
    const std::uint64_t* row = dp.data() + mask * width;
    std::uint64_t rest = full & ~static_cast<std::uint64_t>(mask);
    while (rest) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      const std::uint64_t sel = adj[v] & mask;
      if (!sel) continue;
      const std::size_t target = (mask | (std::size_t{1} << v)) * width + v;
      dp[target] = k.masked_sum_u64(row, sel);
      if (shadow) approx[target] = k.masked_sum_f64(approx.data() + mask * width, sel);
    }
  }
  const std::uint64_t low = k.masked_sum_u64(dp.data() + full * width, start);
  BigCount directed;
  if (!shadow) {
    directed = BigCount(low);
  } else {
    // The double DP carries the magnitude with relative error ~n^2 eps, far
    // below 2^63 in absolute terms for n <= 30, so the high word is exact.
    const double estimate = k.masked_sum_f64(approx.data() + full * width, start);
    const double high = std::nearbyint((estimate - static_cast<double>(low)) * 0x1.0p-64);
    const auto hi = static_cast<unsigned __int128>(static_cast<std::uint64_t>(high));
    directed = BigCount((hi << 64) | low);
  }
  return directed.divided_exactly(2);
}

BigCount count_hamilton_cycles_bruteforce(const Graph& g, const CounterCaps& caps) {
  const int n = g.n();
  check_cap(n, caps.hamilton_bruteforce, "count_hamilton_cycles_bruteforce");
  if (n < 3) return BigCount{};
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t count = 0;
  // Vertex 0 fixed first; each undirected cycle appears twice (two
  // directions), keep the one with order[1] < order.back().
  do {
    if (order[1] > order.back()) continue;
    if (is_hamilton_cycle(g, order)) ++count;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return BigCount(count);
}

Matrix Matrix::identity(int n) {
  Matrix a{n, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n, 0)};
  for (int i = 0; i < n; ++i) a.entries[static_cast<std::size_t>(i) * n + i] = 1;
  return a;
}

Matrix Matrix::ones(int n) { return Matrix{n, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n, 1)}; }

Matrix Matrix::adjacency(const OrientedGraph& d) { return Matrix{d.n(), d.adjacency()}; }

BigCount permanent(const Matrix& a, const CounterCaps& caps) {
  const int n = a.n;
  check_cap(n, std::min(caps.permanent, 62), "permanent");
  if (a.entries.size() != static_cast<std::size_t>(n) * n) throw PreconditionError("permanent: matrix is not square");
  if (n == 0) return BigCount{std::uint64_t{1}};
  double log2_bound = 0.0;
  for (int i = 0; i < n; ++i) {
    std::int64_t rs = 0;
    for (int j = 0; j < n; ++j) {
      if (a.at(i, j) < 0) throw PreconditionError("permanent: negative entry");
      rs += a.at(i, j);
    }
    if (rs == 0) return BigCount{};
    log2_bound += std::log2(static_cast<double>(rs));
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::int64_t> cols(un * un);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cols[static_cast<std::size_t>(j) * un + i] = a.at(i, j);

  const auto& k = kernels::active();
  std::vector<std::int64_t> rowsum(un, 0);
  std::vector<char> in_set(un, 0);
  int set_size = 0;
  const std::uint64_t steps = std::uint64_t{1} << n;

  // perm = (-1)^n sum_S (-1)^|S| prod_i rowsum_i(S). Wrapping 128-bit
  // arithmetic is exact while the permanent stays below 2^127, which the
  // product of row sums bounds.
  if (log2_bound < 126.0) {
    unsigned __int128 acc = 0;
    for (std::uint64_t step = 1; step < steps; ++step) {
      const int j = std::countr_zero(step);
      in_set[j] ^= 1;
      const std::int64_t sign = in_set[j] ? 1 : -1;
      set_size += static_cast<int>(sign);
      k.accumulate_i64(rowsum.data(), cols.data() + static_cast<std::size_t>(j) * un, sign, un);
      unsigned __int128 prod = 1;
      for (std::size_t i = 0; i < un && prod; ++i) prod *= static_cast<unsigned __int128>(rowsum[i]);
      if ((n - set_size) % 2 == 0)
        acc += prod;
      else
        acc -= prod;
    }
    return BigCount(acc);
  }
  BigCount::Rep acc = 0;
  for (std::uint64_t step = 1; step < steps; ++step) {
    const int j = std::countr_zero(step);
    in_set[j] ^= 1;
    const std::int64_t sign = in_set[j] ? 1 : -1;
    set_size += static_cast<int>(sign);
    k.accumulate_i64(rowsum.data(), cols.data() + static_cast<std::size_t>(j) * un, sign, un);
    BigCount::Rep prod = 1;
    for (std::size_t i = 0; i < un && prod != 0; ++i) prod *= rowsum[i];
    if ((n - set_size) % 2 == 0)
      acc += prod;
    else
      acc -= prod;
  }
  return BigCount(std::move(acc));
}

namespace {

// Backtracking over the lowest undecided vertex: it is either left uncovered
// or starts a cycle through undecided vertices only (all of which are larger),
// so every cycle collection is produced exactly once.
class OneFactorCounter {
 public:
  OneFactorCounter(const OrientedGraph& d, int allow_missing) : d_(d), allow_(allow_missing) {}

  std::map<int, std::uint64_t> run() {
    rec(full_mask(d_.n()), 0, 0);
    return census_;
  }

 private:
  void rec(std::uint64_t free, int missing, int s) {
    if (!free) {
      ++census_[s];
      return;
    }
    const int v = std::countr_zero(free);
    const std::uint64_t vb = std::uint64_t{1} << v;
    if (missing < allow_) rec(free & ~vb, missing + 1, s);
    extend(v, v, vb, free, missing, s);
  }

  void extend(int start, int cur, std::uint64_t used, std::uint64_t free, int missing, int s) {
    if (cur != start && d_.has_arc(cur, start)) rec(free & ~used, missing, s + 1);
    std::uint64_t next = d_.out_mask(cur) & free & ~used;
    while (next) {
      const int w = std::countr_zero(next);
      next &= next - 1;
      extend(start, w, used | (std::uint64_t{1} << w), free, missing, s);
    }
  }

  const OrientedGraph& d_;
  int allow_;
  std::map<int, std::uint64_t> census_;
};

class TwoFactorWalker {
 public:
  TwoFactorWalker(const Graph& g, int allow_isolated, const std::function<void(const Factor&)>* visit)
      : g_(g), allow_(allow_isolated), visit_(visit) {}

  std::map<int, std::uint64_t> run() {
    rec(full_mask(g_.n()), 0);
    return census_;
  }

 private:
  void rec(std::uint64_t free, int s) {
    if (!free) {
      ++census_[s];
      if (visit_) (*visit_)(Factor(g_.n(), cycles_, isolated_));
      return;
    }
    const int v = std::countr_zero(free);
    const std::uint64_t vb = std::uint64_t{1} << v;
    if (static_cast<int>(isolated_.size()) < allow_) {
      isolated_.push_back(v);
      rec(free & ~vb, s);
      isolated_.pop_back();
    }
    path_.assign(1, v);
    extend(vb, free, s);
  }

  void extend(std::uint64_t used, std::uint64_t free, int s) {
    const int start = path_.front();
    const int cur = path_.back();
    // Cycles of length >= 3, each direction once: second vertex < last vertex.
    if (path_.size() >= 3 && path_[1] < cur && g_.has_edge(cur, start)) {
      const auto saved = path_;
      if (visit_) cycles_.push_back(path_);
      rec(free & ~used, s + 1);
      if (visit_) cycles_.pop_back();
      path_ = saved;
    }
    std::uint64_t next = g_.row_mask(cur) & free & ~used;
    while (next) {
      const int w = std::countr_zero(next);
      next &= next - 1;
      path_.push_back(w);
      extend(used | (std::uint64_t{1} << w), free, s);
      path_.pop_back();
    }
  }

  const Graph& g_;
  int allow_;
  const std::function<void(const Factor&)>* visit_;
  std::map<int, std::uint64_t> census_;
  std::vector<Vertex> path_;
  std::vector<std::vector<Vertex>> cycles_;
  VertexSet isolated_;
};

FactorCensus to_census(const std::map<int, std::uint64_t>& raw, int budget) {
  FactorCensus c;
  c.isolated_budget = budget;
  for (const auto& [s, v] : raw) c.by_cycles[s] = BigCount(v);
  return c;
}

}  // namespace

FactorCensus count_one_factors(const OrientedGraph& d, int allow_missing, const CounterCaps& caps) {
  check_cap(d.n(), caps.enumeration, "count_one_factors");
  if (allow_missing < 0) throw PreconditionError("count_one_factors: negative budget");
  return to_census(OneFactorCounter(d, allow_missing).run(), allow_missing);
}

FactorCensus count_two_factors(const Graph& g, int allow_isolated, const CounterCaps& caps) {
  check_cap(g.n(), caps.enumeration, "count_two_factors");
  if (allow_isolated < 0) throw PreconditionError("count_two_factors: negative budget");
  return to_census(TwoFactorWalker(g, allow_isolated, nullptr).run(), allow_isolated);
}

void enumerate_two_factors(const Graph& g, int allow_isolated, const std::function<void(const Factor&)>& visit,
                           const CounterCaps& caps) {
  check_cap(g.n(), caps.enumeration, "enumerate_two_factors");
  if (allow_isolated < 0) throw PreconditionError("enumerate_two_factors: negative budget");
  TwoFactorWalker(g, allow_isolated, &visit).run();
}

BigCount count_perfect_matchings(const Graph& g, const CounterCaps& caps) {
  const int n = g.n();
  check_cap(n, std::min(caps.matching_dp, 30), "count_perfect_matchings");
  if (n % 2) return BigCount{};
  if (n == 0) return BigCount{std::uint64_t{1}};
  const std::size_t masks = std::size_t{1} << n;
  // dp[mask]: perfect matchings of the vertex set `mask`. Matching the lowest
  // vertex first makes each matching appear once.
  std::vector<std::uint64_t> dp(masks, 0);
  dp[0] = 1;
  for (std::size_t mask = 3; mask < masks; ++mask) {
    if (std::popcount(mask) % 2) continue;
    const int low = std::countr_zero(mask);
    const std::size_t rest = mask & (mask - 1);
    std::uint64_t partners = g.row_mask(low) & rest;
    std::uint64_t sum = 0;
    while (partners) {
      const int v = std::countr_zero(partners);
      partners &= partners - 1;
      sum += dp[rest & ~(std::size_t{1} << v)];
    }
    dp[mask] = sum;
  }
  return BigCount(dp[masks - 1]);
}

LogValue LogValue::from_log(double l) { return LogValue{l, std::exp(l)}; }

LogValue expected_hamilton(int n, double p) {
  if (n < 3) throw DomainError("expected_hamilton: n must be >= 3");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("expected_hamilton: p outside [0, 1]");
  if (p == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  return LogValue::from_log(std::lgamma(static_cast<double>(n)) + n * std::log(p) - std::log(2.0));
}

LogValue kko_factor_bound(int n_prime, double p, int s) {
  if (n_prime < 3) throw DomainError("kko_factor_bound: n' must be >= 3");
  if (s < 1) throw DomainError("kko_factor_bound: s must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("kko_factor_bound: p outside [0, 1]");
  if (p == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  const double nn = n_prime;
  return LogValue::from_log(std::lgamma(nn) + (s - 1) * std::log(std::log(nn)) + nn * std::log(p) -
                            std::lgamma(static_cast<double>(s)) - s * std::log(2.0));
}

VdwBound vdw_lower_bound(int d_reg, int n) {
  if (n < 1 || d_reg < 0 || d_reg > n) throw DomainError("vdw_lower_bound: need 0 <= d <= n, n >= 1");
  if (d_reg == 0) {
    const LogValue zero{-std::numeric_limits<double>::infinity(), 0.0};
    return {zero, zero};
  }
  const double d = d_reg, nn = n;
  return {LogValue::from_log(nn * std::log(d) + std::lgamma(nn + 1) - nn * std::log(nn)),
          LogValue::from_log(nn * (std::log(d) - 1.0))};
}

FormulaInputs formula_inputs(int n, double p) {
  if (n < 16) throw DomainError("formula_inputs: n must be >= 16");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("formula_inputs: p outside (0, 1]");
  const double nn = n;
  const double np = nn * p;
  if (np <= 1.0) throw DomainError("formula_inputs: np must exceed 1");
  const double ln_n = std::log(nn);
  const double lnln_n = std::log(ln_n);
  FormulaInputs f;
  f.n = n;
  f.p = p;
  f.np = np;
  f.r = np / 2.0;
  f.d = np - 100.0 * np / lnln_n;
  f.s_star = nn / (ln_n * std::sqrt(lnln_n));
  f.k = 17.0 * f.s_star * ln_n / std::log(np);
  f.rotation_budget = 3.0 * ln_n / std::log(np);
  f.endpoint_target = nn / 3000.0;
  f.isolated_budget = isolated_budget(n);
  const double base = np / 3000.0;
  const double goal = 1.0 / p;
  if (p == 1.0) {
    f.t0 = 1;
  } else if (base > 1.0) {
    int t = 1;
    while (std::pow(base, t - 1) < goal) ++t;
    f.t0 = t;
  }
  return f;
}

int clamped_s_star(int n) {
  if (n < 3) return 1;
  const double ln_n = std::log(static_cast<double>(n));
  const double lnln_n = std::log(ln_n);
  if (lnln_n <= 0.0) return 1;
  return std::max(1, static_cast<int>(std::floor(n / (ln_n * std::sqrt(lnln_n)))));
}

LogValue double_count_lower_bound(const BigCount& census_total, int n, int k, int max_degree) {
  if (k < 0 || k > n) throw DomainError("double_count_lower_bound: need 0 <= k <= n");
  if (max_degree < 0) throw DomainError("double_count_lower_bound: negative degree");
  if (census_total.is_zero()) return {-std::numeric_limits<double>::infinity(), 0.0};
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return LogValue::from_log(census_total.log() - log_binom - 2.0 * k * std::log(max_degree + 1.0));
}

}  // namespace hamlab
