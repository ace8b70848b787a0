#include "craft/cluster_state.hpp"

#include <algorithm>
#include <cmath>

#include "craft/error.hpp"

namespace craft {

std::vector<Mask> ClusterState::masks() const {
  std::vector<Mask> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.mask);
  return out;
}

std::vector<double> smoothed_frequencies(std::span<const std::size_t> counts, std::size_t total, double smoothing) {
  const double denom = static_cast<double>(total) + smoothing * static_cast<double>(counts.size());
  std::vector<double> out(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) out[t] = (static_cast<double>(counts[t]) + smoothing) / denom;
  return out;
}

namespace {

struct Accumulator {
  std::size_t members = 0;
  std::vector<std::vector<std::size_t>> counts;  // [cat slot][category]
  std::vector<double> sum;                       // [num slot]

  explicit Accumulator(const Dataset& data) : counts(data.categorical_count()), sum(data.numeric_count(), 0.0) {
    for (std::size_t s = 0; s < counts.size(); ++s) counts[s].assign(data.cardinality(s), 0);
  }
};

std::vector<ClusterStats> finish(const Dataset& data, std::span<const std::int32_t> z,
                                 std::vector<Accumulator>& acc, double smoothing, double sigma_min) {
  const std::size_t K = acc.size();
  std::vector<ClusterStats> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    out[k].eta.resize(data.categorical_count());
    for (std::size_t s = 0; s < data.categorical_count(); ++s)
      out[k].eta[s] = smoothed_frequencies(acc[k].counts[s], acc[k].members, smoothing);
    out[k].zeta.resize(data.numeric_count());
    for (std::size_t s = 0; s < data.numeric_count(); ++s)
      out[k].zeta[s] = acc[k].sum[s] / static_cast<double>(acc[k].members);
    out[k].sigma.assign(data.numeric_count(), 0.0);
  }
  // Second pass: squared deviations about the mean.
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto k = static_cast<std::size_t>(z[n]);
    if (k >= K) continue;
    for (std::size_t s = 0; s < data.numeric_count(); ++s) {
      const double dev = data.value(n, s) - out[k].zeta[s];
      out[k].sigma[s] += dev * dev;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (auto& sig : out[k].sigma) {
      if (acc[k].members == 1)
        sig = 1.0;
      else
        sig = std::max(sigma_min, std::sqrt(sig / static_cast<double>(acc[k].members)));
    }
  }
  return out;
}

void accumulate(const Dataset& data, std::size_t n, Accumulator& a) {
  ++a.members;
  for (std::size_t s = 0; s < data.categorical_count(); ++s) ++a.counts[s][data.code(n, s)];
  for (std::size_t s = 0; s < data.numeric_count(); ++s) a.sum[s] += data.value(n, s);
}

}  // namespace

ClusterStats cluster_stats(const Dataset& data, std::span<const std::int32_t> z, std::int32_t k, double smoothing,
                           double sigma_min) {
  if (z.size() != data.rows()) throw Error(ErrorKind::LengthMismatch, "assignment vector length differs from N");
  std::vector<Accumulator> acc(1, Accumulator(data));
  std::vector<std::int32_t> local(z.size(), 1);  // 0 marks members of k
  for (std::size_t n = 0; n < data.rows(); ++n) {
    if (z[n] == k) {
      local[n] = 0;
      accumulate(data, n, acc[0]);
    }
  }
  if (acc[0].members == 0) throw Error(ErrorKind::EmptyCluster, "cluster " + std::to_string(k) + " has no members");
  return std::move(finish(data, local, acc, smoothing, sigma_min)[0]);
}

ClusterStats point_stats(const Dataset& data, std::size_t row, double smoothing) {
  std::vector<Accumulator> acc(1, Accumulator(data));
  accumulate(data, row, acc[0]);
  ClusterStats out;
  out.eta.resize(data.categorical_count());
  for (std::size_t s = 0; s < data.categorical_count(); ++s)
    out.eta[s] = smoothed_frequencies(acc[0].counts[s], 1, smoothing);
  out.zeta = acc[0].sum;
  out.sigma.assign(data.numeric_count(), 1.0);
  return out;
}

std::vector<ClusterStats> all_cluster_stats(const Dataset& data, std::span<const std::int32_t> z, std::size_t K,
                                            double smoothing, double sigma_min) {
  if (z.size() != data.rows()) throw Error(ErrorKind::LengthMismatch, "assignment vector length differs from N");
  std::vector<Accumulator> acc(K, Accumulator(data));
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto k = z[n];
    if (k < 0 || static_cast<std::size_t>(k) >= K)
      throw Error(ErrorKind::InvalidArgument, "assignment out of range", n);
    accumulate(data, n, acc[static_cast<std::size_t>(k)]);
  }
  for (std::size_t k = 0; k < K; ++k)
    if (acc[k].members == 0) throw Error(ErrorKind::EmptyCluster, "cluster " + std::to_string(k) + " has no members");
  return finish(data, z, acc, smoothing, sigma_min);
}

std::vector<std::vector<double>> global_categorical_means(const Dataset& data, double smoothing) {
  std::vector<std::vector<double>> out(data.categorical_count());
  for (std::size_t s = 0; s < data.categorical_count(); ++s) {
    std::vector<std::size_t> counts(data.cardinality(s), 0);
    for (auto c : data.categorical_column(s)) ++counts[static_cast<std::size_t>(c)];
    out[s] = smoothed_frequencies(counts, data.rows(), smoothing);
  }
  return out;
}

std::size_t compact_clusters(ClusterState& state) {
  const std::size_t K = state.clusters.size();
  std::vector<std::size_t> members(K, 0);
  for (auto k : state.z) ++members[static_cast<std::size_t>(k)];
  std::vector<std::int32_t> remap(K, -1);
  std::vector<ClusterParams> kept;
  kept.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (members[k] == 0) continue;
    remap[k] = static_cast<std::int32_t>(kept.size());
    kept.push_back(std::move(state.clusters[k]));
  }
  for (auto& k : state.z) k = remap[static_cast<std::size_t>(k)];
  const std::size_t removed = K - kept.size();
  state.clusters = std::move(kept);
  return removed;
}

}  // namespace craft
