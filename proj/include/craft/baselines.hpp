#pragma once

#include <cstdint>
#include <optional>

#include "craft/dataset.hpp"
#include "craft/engine.hpp"
#include "craft/lambda_select.hpp"

namespace craft {

enum class BaselineKind { DPMeans, DPMeansR, DPRF, BinaryEntropy };

// Replaces every categorical column with one 0/1 numeric column per category,
// named "<column>=<category>", in place. Labels carry over.
Dataset one_hot_encode(const Dataset& data);

// Throws NonNumericFeature naming every categorical column.
void require_numeric(const Dataset& data);

// Throws NonBinaryFeature naming every column that is not two-category
// categorical.
void require_binary(const Dataset& data);

// Centres live in state.clusters[k].stats.zeta; masks are all ones.
// Objective: sum of squared distances to cluster means + lambda K.
ClusteringResult dpmeans_fit(const Dataset& data, double lambda, InitKind init, std::uint64_t seed,
                             int max_iters = 100);

// DP-means(R) with the CRAFT feature term: cost sum_d v_kd (x - zeta)^2 +
// |v_k| F_delta, new cluster above lambda + D F0, and per-pass masks keeping
// the round(m D) features of lowest within-cluster variance. m = 1 is the
// full-mask limit where the prior terms vanish.
ClusteringResult dprf_fit(const Dataset& data, double lambda, double m, std::optional<double> rho,
                          std::uint64_t seed, int max_iters = 100);

// -p log p - (1-p) log(1-p), with H(0) = H(1) = 0.
double binary_entropy(double p);

// H(mu) + (mu - x) log(mu / (1 - mu)), the per-feature cost of a binary
// value x against a cluster mean mu in (0, 1).
double binary_discrepancy(int x, double mu);

// Hard clustering of binary data by per-cluster entropy. Means are clamped
// into [smoothing, 1 - smoothing] when used as centres; the reported
// objective is sum_k N_k sum_d H(mean_kd) + lambda K on the raw means.
ClusteringResult binary_entropy_fit(const Dataset& data, double lambda, std::uint64_t seed, int max_iters = 100,
                                    double smoothing = kDefaultSmoothing);

// Objectives evaluated on an arbitrary assignment (means recomputed).
double dpmeans_objective(const Dataset& data, std::span<const std::int32_t> z, double lambda);
double binary_entropy_objective(const Dataset& data, std::span<const std::int32_t> z, double lambda);

}  // namespace craft
