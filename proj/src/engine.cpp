#include "craft/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "craft/error.hpp"

namespace craft {

void Hyperparams::validate() const {
  if (!(lambda >= 0.0) || std::isnan(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (!(m > 0.0 && m < 1.0)) throw Error(ErrorKind::InvalidArgument, "m must lie in (0, 1)");
  resolve_rho(m, rho);
  if (mode == BudgetMode::Approx) {
    if (!(eps_c > 0.0 && eps_c < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps_c must lie in (0, 1)");
    if (!(eps_v > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps_v must be > 0");
  }
  if (!(smoothing > 0.0)) throw Error(ErrorKind::InvalidArgument, "smoothing must be > 0");
  if (!(sigma_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma_min must be > 0");
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  if (fixed_sigma && !(*fixed_sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "fixed sigma must be > 0");
}

std::size_t budget_count(double m, std::size_t group) {
  const double raw = std::floor(m * static_cast<double>(group) + 0.5);
  if (raw <= 0.0) return 0;
  return std::min(group, static_cast<std::size_t>(raw));
}

double point_cost(const Dataset& data, std::size_t row, const ClusterState& state, std::size_t k,
                  const FConstants& fc) {
  const auto& c = state.clusters[k];
  double cost = 0.0;
  std::size_t selected = 0;
  for (std::size_t s = 0; s < data.numeric_count(); ++s) {
    if (!c.mask[data.numeric_features()[s]]) continue;
    ++selected;
    const double dev = data.value(row, s) - c.stats.zeta[s];
    const double sig = c.stats.sigma[s];
    cost += dev * dev / (2.0 * sig * sig);
  }
  for (std::size_t s = 0; s < data.categorical_count(); ++s) {
    const auto t = static_cast<std::size_t>(data.code(row, s));
    if (c.mask[data.categorical_features()[s]]) {
      ++selected;
      cost -= std::log(c.stats.eta[s][t]);
    } else {
      cost -= std::log(state.eta0[s][t]);
    }
  }
  return cost + static_cast<double>(selected) * fc.F_delta;
}

double new_cluster_feature_prob(std::size_t feature, const ClusterState& state, const FConstants& fc) {
  double num = 0.0;
  for (const auto& c : state.clusters) num += fc.a(c.mask[feature]);
  return num / (static_cast<double>(state.size()) * (fc.a0 + fc.b0));
}

CategoricalGain g_values(const Dataset& data, std::size_t k, std::size_t feature, const ClusterState& state) {
  if (data.kind(feature) != FeatureKind::Categorical)
    throw Error(ErrorKind::InvalidArgument, "g_values needs a categorical feature", std::nullopt,
                data.schema().columns[feature].name);
  const std::size_t s = data.slot(feature);
  const auto& eta_k = state.clusters[k].stats.eta[s];
  const auto& eta_0 = state.eta0[s];
  CategoricalGain g;
  std::size_t members = 0;
  for (std::size_t n = 0; n < data.rows(); ++n) {
    if (state.z[n] != static_cast<std::int32_t>(k)) continue;
    ++members;
    const auto t = static_cast<std::size_t>(data.code(n, s));
    g.global -= std::log(eta_0[t]);
    g.cluster -= std::log(eta_k[t]);
  }
  if (members == 0) throw Error(ErrorKind::EmptyCluster, "cluster " + std::to_string(k) + " has no members");
  return g;
}

namespace {

// Indices of the `count` best entries under `better`, ties to lower index.
template <class Better>
std::vector<std::size_t> top_indices(std::size_t n, std::size_t count, Better better) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), better);
  idx.resize(count);
  return idx;
}

}  // namespace

Mask select_features_fixed(const ClusterState& state, const Dataset& data, std::size_t k, double m) {
  Mask mask(data.features(), 0);
  const auto& stats = state.clusters[k].stats;

  const auto n_num = budget_count(m, data.numeric_count());
  for (auto s : top_indices(data.numeric_count(), n_num,
                            [&](std::size_t a, std::size_t b) { return stats.sigma[a] < stats.sigma[b]; }))
    mask[data.numeric_features()[s]] = 1;

  const auto n_cat = budget_count(m, data.categorical_count());
  if (n_cat > 0) {
    std::vector<double> gain(data.categorical_count());
    for (std::size_t s = 0; s < gain.size(); ++s)
      gain[s] = g_values(data, k, data.categorical_features()[s], state).gain();
    for (auto s : top_indices(gain.size(), n_cat, [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; }))
      mask[data.categorical_features()[s]] = 1;
  }
  return mask;
}

Mask select_features_approx(const ClusterState& state, const Dataset& data, std::size_t k, double eps_c,
                            double eps_v) {
  Mask mask(data.features(), 0);
  const auto& stats = state.clusters[k].stats;
  for (std::size_t s = 0; s < data.numeric_count(); ++s)
    if (stats.sigma[s] * stats.sigma[s] < eps_v) mask[data.numeric_features()[s]] = 1;
  for (std::size_t s = 0; s < data.categorical_count(); ++s) {
    const auto d = data.categorical_features()[s];
    const auto g = g_values(data, k, d, state);
    if (g.gain() > eps_c * g.global) mask[d] = 1;
  }
  return mask;
}

double objective_value(const Dataset& data, const ClusterState& state, double lambda, const FConstants& fc) {
  double total = 0.0;
  for (std::size_t n = 0; n < data.rows(); ++n) {
    const auto& c = state.clusters[static_cast<std::size_t>(state.z[n])];
    for (std::size_t s = 0; s < data.numeric_count(); ++s) {
      if (!c.mask[data.numeric_features()[s]]) continue;
      const double dev = data.value(n, s) - c.stats.zeta[s];
      total += dev * dev / (2.0 * c.stats.sigma[s] * c.stats.sigma[s]);
    }
    for (std::size_t s = 0; s < data.categorical_count(); ++s) {
      const auto t = static_cast<std::size_t>(data.code(n, s));
      total -= std::log(c.mask[data.categorical_features()[s]] ? c.stats.eta[s][t] : state.eta0[s][t]);
    }
  }
  const double K = static_cast<double>(state.size());
  std::size_t selected = 0;
  for (const auto& c : state.clusters) selected += static_cast<std::size_t>(std::count(c.mask.begin(), c.mask.end(), 1));
  return total + (lambda + static_cast<double>(data.features()) * fc.F0) * K + static_cast<double>(selected) * fc.F_delta;
}

CraftFitter::CraftFitter(const Dataset& data, const Hyperparams& hp)
    : data_(data), hp_(hp), rho_(0.0), rng_(hp.seed) {
  hp_.validate();
  rho_ = resolve_rho(hp_.m, hp_.rho);
  fc_ = compute_f_constants(hp_.m, rho_);
}

void CraftFitter::apply_fixed_sigma(ClusterStats& stats) const {
  if (hp_.fixed_sigma) std::fill(stats.sigma.begin(), stats.sigma.end(), *hp_.fixed_sigma);
}

Mask CraftFitter::draw_initial_mask() {
  if (hp_.full_masks) return Mask(data_.features(), 1);
  Mask mask(data_.features());
  for (auto& v : mask) v = std::bernoulli_distribution(hp_.m)(rng_) ? 1 : 0;
  return mask;
}

Mask CraftFitter::draw_new_cluster_mask() {
  if (hp_.full_masks) return Mask(data_.features(), 1);
  Mask mask(data_.features());
  for (std::size_t d = 0; d < mask.size(); ++d)
    mask[d] = std::bernoulli_distribution(new_cluster_feature_prob(d, state_, fc_))(rng_) ? 1 : 0;
  return mask;
}

void CraftFitter::initialize() {
  const auto centre = std::uniform_int_distribution<std::size_t>(0, data_.rows() - 1)(rng_);
  state_ = ClusterState{};
  ClusterParams first{point_stats(data_, centre, hp_.smoothing), {}};
  apply_fixed_sigma(first.stats);
  first.mask = draw_initial_mask();
  state_.clusters.push_back(std::move(first));
  state_.eta0 = global_categorical_means(data_, hp_.smoothing);
  state_.z.assign(data_.rows(), 0);
  first_pass_ = true;
}

PassRecord CraftFitter::assignment_pass() {
  PassRecord record;
  record.decisions.resize(data_.rows());
  const double limit = threshold();
  for (std::size_t n = 0; n < data_.rows(); ++n) {
    auto& dec = record.decisions[n];
    dec.nearest_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < state_.size(); ++k) {
      const double cost = point_cost(data_, n, state_, k, fc_);
      if (cost < dec.nearest_cost) {
        dec.nearest_cost = cost;
        dec.nearest = static_cast<std::int32_t>(k);
      }
    }
    std::int32_t target = dec.nearest;
    if (dec.nearest_cost > limit) {
      ClusterParams fresh{point_stats(data_, n, hp_.smoothing), draw_new_cluster_mask()};
      apply_fixed_sigma(fresh.stats);
      state_.clusters.push_back(std::move(fresh));
      target = static_cast<std::int32_t>(state_.size() - 1);
      dec.opened = true;
      ++record.opened;
    }
    dec.cluster = target;
    if (state_.z[n] != target) record.changed = true;
    state_.z[n] = target;
  }
  // The initial all-in-one assignment is a placeholder, not a decision.
  if (first_pass_) record.changed = true;
  first_pass_ = false;
  return record;
}

void CraftFitter::refresh() {
  compact_clusters(state_);
  auto stats = all_cluster_stats(data_, state_.z, state_.size(), hp_.smoothing, hp_.sigma_min);
  for (std::size_t k = 0; k < state_.size(); ++k) {
    apply_fixed_sigma(stats[k]);
    state_.clusters[k].stats = std::move(stats[k]);
  }
  if (hp_.full_masks) return;
  // Masks are chosen against the refreshed statistics; computing all of them
  // before assigning keeps each choice independent of the others.
  std::vector<Mask> masks(state_.size());
  for (std::size_t k = 0; k < state_.size(); ++k)
    masks[k] = hp_.mode == BudgetMode::Fixed ? select_features_fixed(state_, data_, k, hp_.m)
                                             : select_features_approx(state_, data_, k, hp_.eps_c, hp_.eps_v);
  for (std::size_t k = 0; k < state_.size(); ++k) state_.clusters[k].mask = std::move(masks[k]);
}

double CraftFitter::objective() const { return objective_value(data_, state_, hp_.lambda, fc_); }

ClusteringResult craft_fit(const Dataset& data, const Hyperparams& hp) {
  CraftFitter fitter(data, hp);
  fitter.initialize();
  ClusteringResult result;
  for (int iter = 1; iter <= hp.max_iters; ++iter) {
    const auto pass = fitter.assignment_pass();
    fitter.refresh();
    result.iterations = iter;
    result.objective_trace.push_back(fitter.objective());
    if (!pass.changed) {
      result.converged = true;
      break;
    }
  }
  result.state = fitter.state();
  result.objective = result.objective_trace.back();
  return result;
}

}  // namespace craft
