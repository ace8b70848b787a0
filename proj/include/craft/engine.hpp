#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "craft/cluster_state.hpp"
#include "craft/constants.hpp"
#include "craft/dataset.hpp"

namespace craft {

enum class BudgetMode { Fixed, Approx };

struct Hyperparams {
  double lambda = 1.0;
  double m = 0.5;
  std::optional<double> rho;  // unset = auto
  BudgetMode mode = BudgetMode::Fixed;
  double eps_c = 0.9;  // Approx only
  double eps_v = 4.0;  // Approx only
  double smoothing = kDefaultSmoothing;
  double sigma_min = kDefaultSigmaMin;
  int max_iters = 100;
  std::uint64_t seed = 0;

  // Degenerate-case controls: keep every feature selected, and/or pin every
  // numeric spread to one value instead of estimating it.
  bool full_masks = false;
  std::optional<double> fixed_sigma;

  // Throws InvalidArgument / RhoOutOfRange on out-of-domain values.
  void validate() const;
};

struct ClusteringResult {
  ClusterState state;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // objective after each pass

  std::size_t clusters() const { return state.size(); }
};

// Number of features selected from a group of `group` under fraction m:
// round half up, clamped to [0, group].
std::size_t budget_count(double m, std::size_t group);

// d_nk: selected numeric features pay (x - zeta)^2 / (2 sigma^2), categorical
// features pay -log eta_k (selected) or -log eta_0 (not selected), and every
// selected feature adds F_delta.
double point_cost(const Dataset& data, std::size_t row, const ClusterState& state, std::size_t k,
                  const FConstants& fc);

// Probability that a freshly opened cluster selects feature d, pooled over
// the current clusters: sum_j a_{v_jd} / (K (a0 + b0)).
double new_cluster_feature_prob(std::size_t feature, const ClusterState& state, const FConstants& fc);

struct CategoricalGain {
  double global = 0.0;   // G_d: cross-entropy of cluster members under eta_0
  double cluster = 0.0;  // G_kd: cross-entropy of cluster members under eta_k
  double gain() const { return global - cluster; }
};

// Sums run over the members of cluster k only. `feature` must be categorical.
CategoricalGain g_values(const Dataset& data, std::size_t k, std::size_t feature, const ClusterState& state);

// round(m |Num|) numeric features of smallest sigma and round(m |Cat|)
// categorical features of largest gain; ties go to the lower feature index.
Mask select_features_fixed(const ClusterState& state, const Dataset& data, std::size_t k, double m);

// Categorical d kept iff gain > eps_c * G_d; numeric d kept iff sigma^2 < eps_v.
Mask select_features_approx(const ClusterState& state, const Dataset& data, std::size_t k, double eps_c,
                            double eps_v);

// Full objective: discrepancies + (lambda + D F0) K + (sum of mask bits) F_delta.
double objective_value(const Dataset& data, const ClusterState& state, double lambda, const FConstants& fc);

struct PointDecision {
  std::int32_t cluster = 0;       // index after the decision
  std::int32_t nearest = 0;       // argmin over clusters existing at decision time
  double nearest_cost = 0.0;      // min_k d_nk at decision time
  bool opened = false;            // nearest_cost exceeded the threshold
};

struct PassRecord {
  std::vector<PointDecision> decisions;
  bool changed = false;
  std::size_t opened = 0;
};

// Stepwise driver. craft_fit is initialize() followed by rounds of
// assignment_pass() + refresh() until a pass changes nothing.
class CraftFitter {
 public:
  CraftFitter(const Dataset& data, const Hyperparams& hp);

  void initialize();

  // Visits rows in order. A row whose cheapest cluster costs more than
  // lambda + D F0 opens a new cluster centred on itself; new clusters are
  // valid targets for later rows in the same pass. Statistics and masks are
  // not touched.
  PassRecord assignment_pass();

  // Drops empty clusters, then recomputes eta/zeta/sigma and the masks.
  void refresh();

  double objective() const;
  double threshold() const { return hp_.lambda + static_cast<double>(data_.features()) * fc_.F0; }
  const ClusterState& state() const { return state_; }
  ClusterState& mutable_state() { return state_; }
  const FConstants& constants() const { return fc_; }
  double rho() const { return rho_; }

 private:
  Mask draw_initial_mask();
  Mask draw_new_cluster_mask();
  void apply_fixed_sigma(ClusterStats& stats) const;

  const Dataset& data_;
  Hyperparams hp_;
  double rho_;
  FConstants fc_;
  std::mt19937_64 rng_;
  ClusterState state_;
  bool first_pass_ = true;
};

// Runs the fit to convergence or hp.max_iters passes. Deterministic in
// (data, hp); draws are consumed as: initial centre, initial mask in feature
// order, then each new cluster's mask in creation order.
ClusteringResult craft_fit(const Dataset& data, const Hyperparams& hp);

}  // namespace craft
