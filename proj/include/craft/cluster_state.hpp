#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "craft/dataset.hpp"

namespace craft {

// Per-feature selection flags over the D schema features (1 = selected).
using Mask = std::vector<std::uint8_t>;

using Assignments = std::vector<std::int32_t>;

inline constexpr double kDefaultSmoothing = 1e-6;
inline constexpr double kDefaultSigmaMin = 1e-6;

struct ClusterStats {
  std::vector<std::vector<double>> eta;  // [cat slot][category]
  std::vector<double> zeta;              // [num slot]
  std::vector<double> sigma;             // [num slot]
};

struct ClusterParams {
  ClusterStats stats;
  Mask mask;
};

struct ClusterState {
  Assignments z;                             // cluster index per row, 0-based
  std::vector<ClusterParams> clusters;       // K+ entries
  std::vector<std::vector<double>> eta0;     // global categorical means [cat slot][category]

  std::size_t size() const { return clusters.size(); }
  std::vector<Mask> masks() const;
};

// (count + smoothing) / (total + smoothing * |T|) for every category.
std::vector<double> smoothed_frequencies(std::span<const std::size_t> counts, std::size_t total, double smoothing);

// Statistics of the rows assigned to cluster k. Numeric spread is the
// population standard deviation floored at sigma_min; a singleton gets 1.
ClusterStats cluster_stats(const Dataset& data, std::span<const std::int32_t> z, std::int32_t k, double smoothing,
                           double sigma_min);

// Statistics of one row treated as its own cluster (a fresh centre).
ClusterStats point_stats(const Dataset& data, std::size_t row, double smoothing);

// Recomputes every cluster in one sweep; equivalent to calling cluster_stats
// for each k. Throws EmptyCluster if any k in [0, K) has no members.
std::vector<ClusterStats> all_cluster_stats(const Dataset& data, std::span<const std::int32_t> z, std::size_t K,
                                            double smoothing, double sigma_min);

std::vector<std::vector<double>> global_categorical_means(const Dataset& data, double smoothing);

// Drops clusters with no members and renumbers the rest in their original
// order. Returns the number of clusters removed.
std::size_t compact_clusters(ClusterState& state);

}  // namespace craft
