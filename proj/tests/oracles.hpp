#pragma once

// Independent reference evaluators used only by tests. Written from the
// formulas directly, in long double, without calling the library's math.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "craft/cluster_state.hpp"
#include "craft/dataset.hpp"

namespace oracle {

using craft::Dataset;

inline long double xlogx(long double x) { return x == 0 ? 0 : x * std::log(x); }

struct F {
  long double a0, b0, F0, F1;
};

inline F f_constants(long double m, long double rho) {
  const long double a0 = m * m * (1 - m) / rho - m;
  const long double b0 = m * (1 - m) * (1 - m) / rho + m;
  auto f = [](long double a, long double b) { return xlogx(a + b) - xlogx(a) - xlogx(b); };
  return {a0, b0, f(a0, b0), f(a0 + 1, b0 - 1)};
}

// Objective of a state term by term: walk clusters, then features, then rows.
inline long double objective(const Dataset& data, const craft::ClusterState& st, long double lambda, long double m,
                             long double rho) {
  const F f = f_constants(m, rho);
  long double total = 0;
  for (std::size_t k = 0; k < st.clusters.size(); ++k) {
    const auto& c = st.clusters[k];
    total += lambda + static_cast<long double>(data.features()) * f.F0;
    for (std::size_t d = 0; d < data.features(); ++d) {
      const bool on = c.mask[d] != 0;
      if (on) total += f.F1 - f.F0;
      const std::size_t s = data.slot(d);
      for (std::size_t n = 0; n < data.rows(); ++n) {
        if (st.z[n] != static_cast<std::int32_t>(k)) continue;
        if (data.kind(d) == craft::FeatureKind::Numeric) {
          if (!on) continue;
          const long double dev = data.value(n, s) - c.stats.zeta[s];
          const long double sg = c.stats.sigma[s];
          total += dev * dev / (2 * sg * sg);
        } else {
          const auto t = static_cast<std::size_t>(data.code(n, s));
          total -= std::log(static_cast<long double>(on ? c.stats.eta[s][t] : st.eta0[s][t]));
        }
      }
    }
  }
  return total;
}

// Every mask with exactly `num_budget` numeric and `cat_budget` categorical
// features switched on.
inline std::vector<craft::Mask> budget_masks(const Dataset& data, std::size_t num_budget, std::size_t cat_budget) {
  std::vector<craft::Mask> out;
  const std::size_t D = data.features();
  for (std::uint32_t bits = 0; bits < (1u << D); ++bits) {
    std::size_t nn = 0, nc = 0;
    craft::Mask mask(D, 0);
    for (std::size_t d = 0; d < D; ++d) {
      if (!(bits >> d & 1u)) continue;
      mask[d] = 1;
      (data.kind(d) == craft::FeatureKind::Numeric ? nn : nc)++;
    }
    if (nn == num_budget && nc == cat_budget) out.push_back(mask);
  }
  return out;
}

inline long double entropy_bits(long double p) { return -xlogx(p) - xlogx(1 - p); }

// sum_k N_k sum_d H(mean_kd) + lambda K on binary data.
inline long double binary_objective(const Dataset& data, const std::vector<std::int32_t>& z, long double lambda) {
  std::map<std::int32_t, std::vector<std::size_t>> members;
  for (std::size_t n = 0; n < z.size(); ++n) members[z[n]].push_back(n);
  long double total = lambda * static_cast<long double>(members.size());
  for (const auto& [k, rows] : members) {
    for (std::size_t s = 0; s < data.categorical_count(); ++s) {
      long double ones = 0;
      for (auto n : rows) ones += data.code(n, s);
      total += static_cast<long double>(rows.size()) * entropy_bits(ones / static_cast<long double>(rows.size()));
    }
  }
  return total;
}

// Best assignment into one or two blocks by enumeration (row 0 fixed in block 0).
inline std::pair<std::vector<std::int32_t>, long double> best_two_partition(const Dataset& data, long double lambda) {
  const std::size_t N = data.rows();
  std::vector<std::int32_t> best;
  long double best_obj = INFINITY;
  for (std::uint32_t bits = 0; bits < (1u << (N - 1)); ++bits) {
    std::vector<std::int32_t> z(N, 0);
    for (std::size_t n = 1; n < N; ++n) z[n] = static_cast<std::int32_t>(bits >> (n - 1) & 1u);
    const long double obj = binary_objective(data, z, lambda);
    if (obj < best_obj) {
      best_obj = obj;
      best = z;
    }
  }
  return {best, best_obj};
}

inline long double purity(const std::vector<std::int32_t>& p, const std::vector<std::int32_t>& t) {
  std::map<std::int32_t, std::map<std::int32_t, int>> c;
  for (std::size_t i = 0; i < p.size(); ++i) c[p[i]][t[i]]++;
  long double hit = 0;
  for (auto& [_, row] : c) {
    int best = 0;
    for (auto& [__, v] : row) best = std::max(best, v);
    hit += best;
  }
  return hit / static_cast<long double>(p.size());
}

inline long double nmi(const std::vector<std::int32_t>& p, const std::vector<std::int32_t>& t) {
  const long double N = static_cast<long double>(p.size());
  std::map<std::int32_t, long double> cp, ct;
  std::map<std::pair<std::int32_t, std::int32_t>, long double> j;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp[p[i]] += 1;
    ct[t[i]] += 1;
    j[{p[i], t[i]}] += 1;
  }
  long double hp = 0, ht = 0, mi = 0;
  for (auto& [_, v] : cp) hp -= v / N * std::log(v / N);
  for (auto& [_, v] : ct) ht -= v / N * std::log(v / N);
  for (auto& [key, v] : j) mi += v / N * std::log(v * N / (cp[key.first] * ct[key.second]));
  if (cp.size() == 1 && ct.size() == 1) return 1;
  if (cp.size() == 1 || ct.size() == 1) return 0;
  return mi / std::sqrt(hp * ht);
}

inline long double jaccard(const craft::Mask& a, const craft::Mask& b) {
  long double inter = 0, uni = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    inter += (a[d] && b[d]);
    uni += (a[d] || b[d]);
  }
  return uni == 0 ? 1 : inter / uni;
}

// Exhaustive matching over permutations of the larger side.
inline long double mask_recovery(const std::vector<craft::Mask>& planted, const std::vector<craft::Mask>& rec) {
  const std::size_t K = std::max(planted.size(), rec.size());
  std::vector<std::size_t> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  long double best = 0;
  do {
    long double s = 0;
    for (std::size_t i = 0; i < planted.size(); ++i)
      if (perm[i] < rec.size()) s += jaccard(planted[i], rec[perm[i]]);
    best = std::max(best, s / static_cast<long double>(K));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
