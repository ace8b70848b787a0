#include "craft/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "craft/error.hpp"

namespace craft {

Dataset one_hot_encode(const Dataset& data) {
  Schema schema;
  schema.label_column = data.schema().label_column;
  std::vector<std::vector<double>> cols;
  for (std::size_t d = 0; d < data.features(); ++d) {
    const auto& col = data.schema().columns[d];
    const auto s = data.slot(d);
    if (col.kind == FeatureKind::Numeric) {
      schema.columns.push_back(Column::numeric(col.name));
      auto src = data.numeric_column(s);
      cols.emplace_back(src.begin(), src.end());
      continue;
    }
    for (std::size_t t = 0; t < col.categories.size(); ++t) {
      schema.columns.push_back(Column::numeric(col.name + "=" + col.categories[t]));
      std::vector<double> ind(data.rows());
      for (std::size_t n = 0; n < data.rows(); ++n) ind[n] = data.code(n, s) == static_cast<std::int32_t>(t) ? 1.0 : 0.0;
      cols.push_back(std::move(ind));
    }
  }
  std::vector<std::int32_t> labels(data.labels().begin(), data.labels().end());
  return Dataset(std::move(schema), data.rows(), {}, std::move(cols), std::move(labels), data.label_names());
}

void require_numeric(const Dataset& data) {
  if (data.categorical_count() == 0) return;
  std::string names;
  for (auto d : data.categorical_features()) {
    if (!names.empty()) names += ", ";
    names += data.schema().columns[d].name;
  }
  throw Error(ErrorKind::NonNumericFeature,
              "algorithm needs numeric data; one-hot encode the categorical columns: " + names);
}

void require_binary(const Dataset& data) {
  std::string names;
  for (std::size_t d = 0; d < data.features(); ++d) {
    const auto& col = data.schema().columns[d];
    if (col.kind == FeatureKind::Categorical && col.categories.size() == 2) continue;
    if (!names.empty()) names += ", ";
    names += col.name;
  }
  if (!names.empty())
    throw Error(ErrorKind::NonBinaryFeature, "algorithm needs two-category categorical columns: " + names);
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

double binary_discrepancy(int x, double mu) {
  return binary_entropy(mu) + (mu - static_cast<double>(x)) * std::log(mu / (1.0 - mu));
}

namespace {

// Shared sequential pass loop: visit rows in order, join the cheapest
// cluster or open one above the threshold, then compact and refresh.
template <class Model>
ClusteringResult run_passes(Model& model, std::size_t N, int max_iters) {
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  auto& state = model.state;
  ClusteringResult result;
  for (int iter = 1; iter <= max_iters; ++iter) {
    bool changed = iter == 1;
    const double limit = model.threshold();
    for (std::size_t n = 0; n < N; ++n) {
      double best = std::numeric_limits<double>::infinity();
      std::int32_t target = 0;
      for (std::size_t k = 0; k < state.size(); ++k) {
        const double c = model.cost(n, k);
        if (c < best) {
          best = c;
          target = static_cast<std::int32_t>(k);
        }
      }
      if (best > limit) {
        model.open(n);
        target = static_cast<std::int32_t>(state.size() - 1);
      }
      if (state.z[n] != target) changed = true;
      state.z[n] = target;
    }
    compact_clusters(state);
    model.refresh();
    result.iterations = iter;
    result.objective_trace.push_back(model.objective());
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.state = state;
  result.objective = result.objective_trace.back();
  return result;
}

std::vector<double> row_values(const Dataset& data, std::size_t n) {
  std::vector<double> x(data.numeric_count());
  for (std::size_t s = 0; s < x.size(); ++s) x[s] = data.value(n, s);
  return x;
}

std::vector<double> global_mean(const Dataset& data) {
  std::vector<double> mean(data.numeric_count(), 0.0);
  for (std::size_t s = 0; s < mean.size(); ++s) {
    for (double v : data.numeric_column(s)) mean[s] += v;
    mean[s] /= static_cast<double>(data.rows());
  }
  return mean;
}

std::size_t draw_row(std::mt19937_64& rng, std::size_t N) {
  return std::uniform_int_distribution<std::size_t>(0, N - 1)(rng);
}

ClusterParams centre(std::vector<double> zeta, std::size_t D) {
  ClusterParams c;
  c.stats.sigma.assign(zeta.size(), 1.0);
  c.stats.zeta = std::move(zeta);
  c.mask.assign(D, 1);
  return c;
}

// Per-cluster means and population variances of the numeric columns.
void cluster_moments(const Dataset& data, const Assignments& z, std::size_t K, std::vector<std::vector<double>>& mean,
                     std::vector<std::vector<double>>& var) {
  const std::size_t S = data.numeric_count();
  std::vector<std::size_t> size(K, 0);
  mean.assign(K, std::vector<double>(S, 0.0));
  var.assign(K, std::vector<double>(S, 0.0));
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto k = static_cast<std::size_t>(z[n]);
    ++size[k];
    for (std::size_t s = 0; s < S; ++s) mean[k][s] += data.value(n, s);
  }
  for (std::size_t k = 0; k < K; ++k)
    for (auto& v : mean[k]) v /= static_cast<double>(size[k]);
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto k = static_cast<std::size_t>(z[n]);
    for (std::size_t s = 0; s < S; ++s) {
      const double dev = data.value(n, s) - mean[k][s];
      var[k][s] += dev * dev;
    }
  }
  for (std::size_t k = 0; k < K; ++k)
    for (auto& v : var[k]) v /= static_cast<double>(size[k]);
}

struct DPMeansModel {
  const Dataset& data;
  double lambda;
  ClusterState state;

  double threshold() const { return lambda; }
  double cost(std::size_t n, std::size_t k) const {
    const auto& zeta = state.clusters[k].stats.zeta;
    double total = 0.0;
    for (std::size_t s = 0; s < zeta.size(); ++s) {
      const double dev = data.value(n, s) - zeta[s];
      total += dev * dev;
    }
    return total;
  }
  void open(std::size_t n) { state.clusters.push_back(centre(row_values(data, n), data.features())); }
  void refresh() {
    std::vector<std::vector<double>> mean, var;
    cluster_moments(data, state.z, state.size(), mean, var);
    for (std::size_t k = 0; k < state.size(); ++k) {
      state.clusters[k].stats.zeta = std::move(mean[k]);
      state.clusters[k].stats.sigma.resize(data.numeric_count());
      for (std::size_t s = 0; s < data.numeric_count(); ++s) state.clusters[k].stats.sigma[s] = std::sqrt(var[k][s]);
    }
  }
  double objective() const { return dpmeans_objective(data, state.z, lambda); }
};

struct DPRFModel {
  const Dataset& data;
  double lambda;
  double m;
  FConstants fc;  // all zero in the m = 1 limit
  bool full;
  std::mt19937_64& rng;
  ClusterState state;

  double threshold() const { return lambda + static_cast<double>(data.features()) * fc.F0; }
  double cost(std::size_t n, std::size_t k) const {
    const auto& c = state.clusters[k];
    double total = 0.0;
    std::size_t selected = 0;
    for (std::size_t s = 0; s < data.numeric_count(); ++s) {
      if (!c.mask[s]) continue;
      ++selected;
      const double dev = data.value(n, s) - c.stats.zeta[s];
      total += dev * dev;
    }
    return total + static_cast<double>(selected) * fc.F_delta;
  }
  Mask draw_mask() {
    Mask mask(data.features(), 1);
    if (full) return mask;
    for (std::size_t d = 0; d < mask.size(); ++d)
      mask[d] = std::bernoulli_distribution(new_cluster_feature_prob(d, state, fc))(rng) ? 1 : 0;
    return mask;
  }
  void open(std::size_t n) {
    auto c = centre(row_values(data, n), data.features());
    c.mask = draw_mask();
    state.clusters.push_back(std::move(c));
  }
  void refresh() {
    std::vector<std::vector<double>> mean, var;
    cluster_moments(data, state.z, state.size(), mean, var);
    const std::size_t budget = full ? data.features() : budget_count(m, data.features());
    for (std::size_t k = 0; k < state.size(); ++k) {
      auto& c = state.clusters[k];
      std::vector<std::size_t> idx(data.features());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return var[k][a] < var[k][b]; });
      c.mask.assign(data.features(), 0);
      for (std::size_t i = 0; i < budget; ++i) c.mask[idx[i]] = 1;
      c.stats.zeta = std::move(mean[k]);
      c.stats.sigma.resize(data.numeric_count());
      for (std::size_t s = 0; s < data.numeric_count(); ++s) c.stats.sigma[s] = std::sqrt(var[k][s]);
    }
  }
  double objective() const {
    double total = 0.0;
    for (std::size_t n = 0; n < data.rows(); ++n) {
      const auto& c = state.clusters[static_cast<std::size_t>(state.z[n])];
      for (std::size_t s = 0; s < data.numeric_count(); ++s) {
        if (!c.mask[s]) continue;
        const double dev = data.value(n, s) - c.stats.zeta[s];
        total += dev * dev;
      }
    }
    std::size_t selected = 0;
    for (const auto& c : state.clusters) selected += static_cast<std::size_t>(std::count(c.mask.begin(), c.mask.end(), 1));
    return total + threshold() * static_cast<double>(state.size()) + static_cast<double>(selected) * fc.F_delta;
  }
};

struct BinaryModel {
  const Dataset& data;
  double lambda;
  double smoothing;
  ClusterState state;

  double clamp(double mu) const { return std::clamp(mu, smoothing, 1.0 - smoothing); }
  double threshold() const { return lambda; }
  double cost(std::size_t n, std::size_t k) const {
    const auto& mu = state.clusters[k].stats.zeta;
    double total = 0.0;
    for (std::size_t s = 0; s < mu.size(); ++s) total += binary_discrepancy(data.code(n, s), mu[s]);
    return total;
  }
  void open(std::size_t n) {
    std::vector<double> mu(data.categorical_count());
    for (std::size_t s = 0; s < mu.size(); ++s) mu[s] = clamp(static_cast<double>(data.code(n, s)));
    state.clusters.push_back(centre(std::move(mu), data.features()));
  }
  void refresh() {
    const std::size_t K = state.size();
    std::vector<std::size_t> size(K, 0);
    std::vector<std::vector<double>> ones(K, std::vector<double>(data.categorical_count(), 0.0));
    for (std::size_t n = 0; n < data.rows(); ++n) {
      const auto k = static_cast<std::size_t>(state.z[n]);
      ++size[k];
      for (std::size_t s = 0; s < data.categorical_count(); ++s) ones[k][s] += data.code(n, s);
    }
    for (std::size_t k = 0; k < K; ++k) {
      auto& mu = state.clusters[k].stats.zeta;
      for (std::size_t s = 0; s < mu.size(); ++s) mu[s] = clamp(ones[k][s] / static_cast<double>(size[k]));
    }
  }
  double objective() const { return binary_entropy_objective(data, state.z, lambda); }
};

std::size_t cluster_count(std::span<const std::int32_t> z) {
  std::int32_t top = -1;
  for (auto k : z) top = std::max(top, k);
  return static_cast<std::size_t>(top + 1);
}

}  // namespace

double dpmeans_objective(const Dataset& data, std::span<const std::int32_t> z, double lambda) {
  require_numeric(data);
  const std::size_t K = cluster_count(z);
  Assignments zz(z.begin(), z.end());
  std::vector<std::vector<double>> mean, var;
  cluster_moments(data, zz, K, mean, var);
  std::size_t nonempty = 0;
  std::vector<std::size_t> size(K, 0);
  for (auto k : z) ++size[static_cast<std::size_t>(k)];
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (size[k] == 0) continue;
    ++nonempty;
    for (double v : var[k]) total += v * static_cast<double>(size[k]);
  }
  return total + lambda * static_cast<double>(nonempty);
}

double binary_entropy_objective(const Dataset& data, std::span<const std::int32_t> z, double lambda) {
  require_binary(data);
  const std::size_t K = cluster_count(z);
  std::vector<std::size_t> size(K, 0);
  std::vector<std::vector<double>> ones(K, std::vector<double>(data.categorical_count(), 0.0));
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto k = static_cast<std::size_t>(z[n]);
    ++size[k];
    for (std::size_t s = 0; s < data.categorical_count(); ++s) ones[k][s] += data.code(n, s);
  }
  double total = 0.0;
  std::size_t nonempty = 0;
  for (std::size_t k = 0; k < K; ++k) {
    if (size[k] == 0) continue;
    ++nonempty;
    for (double c : ones[k]) total += static_cast<double>(size[k]) * binary_entropy(c / static_cast<double>(size[k]));
  }
  return total + lambda * static_cast<double>(nonempty);
}

ClusteringResult dpmeans_fit(const Dataset& data, double lambda, InitKind init, std::uint64_t seed, int max_iters) {
  require_numeric(data);
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  DPMeansModel model{data, lambda, {}};
  std::mt19937_64 rng(seed);
  auto first = init == InitKind::RandomPoint ? row_values(data, draw_row(rng, data.rows())) : global_mean(data);
  model.state.clusters.push_back(centre(std::move(first), data.features()));
  model.state.z.assign(data.rows(), 0);
  return run_passes(model, data.rows(), max_iters);
}

ClusteringResult dprf_fit(const Dataset& data, double lambda, double m, std::optional<double> rho,
                          std::uint64_t seed, int max_iters) {
  require_numeric(data);
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (!(m > 0.0 && m <= 1.0)) throw Error(ErrorKind::InvalidArgument, "m must lie in (0, 1]");
  const bool full = m == 1.0;
  FConstants fc{};
  if (!full) fc = compute_f_constants(m, resolve_rho(m, rho));
  std::mt19937_64 rng(seed);
  DPRFModel model{data, lambda, m, fc, full, rng, {}};
  auto first = centre(row_values(data, draw_row(rng, data.rows())), data.features());
  if (!full)
    for (auto& v : first.mask) v = std::bernoulli_distribution(m)(rng) ? 1 : 0;
  model.state.clusters.push_back(std::move(first));
  model.state.z.assign(data.rows(), 0);
  return run_passes(model, data.rows(), max_iters);
}

ClusteringResult binary_entropy_fit(const Dataset& data, double lambda, std::uint64_t seed, int max_iters,
                                    double smoothing) {
  require_binary(data);
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (!(smoothing > 0.0 && smoothing < 0.5)) throw Error(ErrorKind::InvalidArgument, "smoothing must lie in (0, 0.5)");
  BinaryModel model{data, lambda, smoothing, {}};
  std::mt19937_64 rng(seed);
  model.open(draw_row(rng, data.rows()));
  model.state.z.assign(data.rows(), 0);
  return run_passes(model, data.rows(), max_iters);
}

}  // namespace craft
