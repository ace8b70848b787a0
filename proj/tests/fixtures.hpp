#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "craft/cluster_state.hpp"
#include "craft/constants.hpp"
#include "craft/dataset.hpp"

namespace fx {

using namespace craft;

// Binary categorical columns named c1..cD with categories {"0","1"}.
inline Dataset binary(const std::vector<std::vector<int>>& rows, std::vector<std::int32_t> labels = {}) {
  Schema s;
  const std::size_t D = rows.front().size();
  for (std::size_t d = 0; d < D; ++d) s.columns.push_back(Column::categorical("c" + std::to_string(d + 1), {"0", "1"}));
  std::vector<std::vector<std::int32_t>> cat(D, std::vector<std::int32_t>(rows.size()));
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (std::size_t d = 0; d < D; ++d) cat[d][n] = rows[n][d];
  std::vector<std::string> names;
  for (std::size_t i = 0; i < labels.size(); ++i) names.push_back("l" + std::to_string(i));
  if (!labels.empty()) s.label_column = "label";
  return Dataset(s, rows.size(), cat, {}, labels, labels.empty() ? std::vector<std::string>{} : names);
}

// Numeric columns x1..xD.
inline Dataset numeric(const std::vector<std::vector<double>>& rows) {
  Schema s;
  const std::size_t D = rows.front().size();
  for (std::size_t d = 0; d < D; ++d) s.columns.push_back(Column::numeric("x" + std::to_string(d + 1)));
  std::vector<std::vector<double>> num(D, std::vector<double>(rows.size()));
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (std::size_t d = 0; d < D; ++d) num[d][n] = rows[n][d];
  return Dataset(s, rows.size(), {}, num);
}

// Random mixed data: each feature is numeric or categorical with 2-3 levels.
inline Dataset random_mixed(std::mt19937_64& rng, std::size_t N, std::size_t D) {
  Schema s;
  std::vector<std::vector<std::int32_t>> cat;
  std::vector<std::vector<double>> num;
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (std::size_t d = 0; d < D; ++d) {
    if (coin(rng)) {
      const int levels = 2 + static_cast<int>(rng() % 2);
      std::vector<std::string> cats;
      for (int t = 0; t < levels; ++t) cats.push_back("v" + std::to_string(t));
      s.columns.push_back(Column::categorical("d" + std::to_string(d), cats));
      std::vector<std::int32_t> col(N);
      for (auto& v : col) v = static_cast<std::int32_t>(rng() % static_cast<unsigned>(levels));
      cat.push_back(col);
    } else {
      s.columns.push_back(Column::numeric("d" + std::to_string(d)));
      std::vector<double> col(N);
      for (auto& v : col) v = gauss(rng);
      num.push_back(col);
    }
  }
  return Dataset(s, N, cat, num);
}

// Assignment over K clusters where every cluster is used.
inline Assignments random_cover(std::mt19937_64& rng, std::size_t N, std::size_t K) {
  Assignments z(N);
  for (std::size_t n = 0; n < N; ++n) z[n] = static_cast<std::int32_t>(n < K ? n : rng() % K);
  std::shuffle(z.begin(), z.end(), rng);
  return z;
}

inline ClusterState state_for(const Dataset& data, const Assignments& z, std::size_t K,
                              double smoothing = kDefaultSmoothing) {
  ClusterState st;
  st.z = z;
  st.eta0 = global_categorical_means(data, smoothing);
  for (auto& stats : all_cluster_stats(data, z, K, smoothing, kDefaultSigmaMin))
    st.clusters.push_back({std::move(stats), Mask(data.features(), 0)});
  return st;
}

inline std::pair<double, double> random_m_rho(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double m = u(rng);
  const double top = m * (1 - m);
  const double rho = top * std::uniform_real_distribution<double>(0.02, 0.98)(rng);
  return {m, rho};
}

}  // namespace fx
