#include "craft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "craft/error.hpp"

namespace craft::metrics {

ContingencyTable ContingencyTable::build(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth) {
  if (pred.size() != truth.size())
    throw Error(ErrorKind::LengthMismatch, "prediction and truth lengths differ (" + std::to_string(pred.size()) +
                                               " vs " + std::to_string(truth.size()) + ")");
  if (pred.empty()) throw Error(ErrorKind::LengthMismatch, "metrics need at least one row");
  std::unordered_map<std::int32_t, std::size_t> rows, cols;
  ContingencyTable t;
  for (std::size_t n = 0; n < pred.size(); ++n) {
    auto [ri, rnew] = rows.emplace(pred[n], rows.size());
    auto [ci, cnew] = cols.emplace(truth[n], cols.size());
    if (rnew) {
      t.counts.emplace_back(cols.size(), 0);
      t.row_totals.push_back(0);
    }
    if (cnew) {
      for (auto& r : t.counts) r.resize(cols.size(), 0);
      t.col_totals.push_back(0);
    }
    ++t.counts[ri->second][ci->second];
    ++t.row_totals[ri->second];
    ++t.col_totals[ci->second];
  }
  t.total = pred.size();
  return t;
}

double purity(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth) {
  const auto t = ContingencyTable::build(pred, truth);
  std::size_t hits = 0;
  for (const auto& row : t.counts) hits += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hits) / static_cast<double>(t.total);
}

namespace {

double entropy(const std::vector<std::size_t>& totals, double N) {
  double h = 0.0;
  for (auto c : totals) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / N;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double nmi(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth) {
  const auto t = ContingencyTable::build(pred, truth);
  const double N = static_cast<double>(t.total);
  const double hp = entropy(t.row_totals, N);
  const double ht = entropy(t.col_totals, N);
  // A single block on one side: zero entropy.
  const bool hp_zero = t.row_totals.size() == 1;
  const bool ht_zero = t.col_totals.size() == 1;
  if (hp_zero && ht_zero) return 1.0;
  if (hp_zero || ht_zero) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
      const auto c = t.counts[i][j];
      if (c == 0) continue;
      const double pij = static_cast<double>(c) / N;
      mi += pij * std::log(pij * N * N / (static_cast<double>(t.row_totals[i]) * static_cast<double>(t.col_totals[j])));
    }
  }
  const double v = mi / std::sqrt(hp * ht);
  return std::clamp(v, 0.0, 1.0);
}

double jaccard(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "mask lengths differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    inter += (a[d] && b[d]) ? 1 : 0;
    uni += (a[d] || b[d]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::int32_t> max_weight_matching(const std::vector<std::vector<double>>& score) {
  const std::size_t rows = score.size();
  const std::size_t cols = rows ? score[0].size() : 0;
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return {};
  // Square cost matrix (minimisation), padded with zeros.
  double top = 0.0;
  for (const auto& r : score)
    for (double v : r) top = std::max(top, v);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, top));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) cost[i][j] = top - score[i][j];

  // Shortest augmenting path formulation, 1-based potentials.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::int32_t> match(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j];
    if (i >= 1 && i <= rows && j <= cols) match[i - 1] = static_cast<std::int32_t>(j - 1);
  }
  return match;
}

double mask_recovery(const std::vector<Mask>& planted, const std::vector<Mask>& recovered) {
  const std::size_t denom = std::max(planted.size(), recovered.size());
  if (denom == 0) return 1.0;
  if (planted.empty() || recovered.empty()) return 0.0;
  std::vector<std::vector<double>> score(planted.size(), std::vector<double>(recovered.size()));
  for (std::size_t i = 0; i < planted.size(); ++i)
    for (std::size_t j = 0; j < recovered.size(); ++j) score[i][j] = jaccard(planted[i], recovered[j]);
  const auto match = max_weight_matching(score);
  double total = 0.0;
  for (std::size_t i = 0; i < planted.size(); ++i)
    if (match[i] >= 0) total += score[i][static_cast<std::size_t>(match[i])];
  return total / static_cast<double>(denom);
}

}  // namespace craft::metrics
