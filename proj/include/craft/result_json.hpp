#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "craft/dataset.hpp"
#include "craft/engine.hpp"

namespace craft {

struct RunInfo {
  std::string algorithm;
  double lambda_used = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;  // mask column names
  nlohmann::json hyperparams = nlohmann::json::object();
};

// {algorithm, k, assignments, masks, feature_names, objective,
//  objective_trace, iterations, converged, lambda_used, seed, hyperparams,
//  metrics{purity, nmi} when `data` has labels}
nlohmann::json result_to_json(const ClusteringResult& result, const RunInfo& info, const Dataset& data);

// K rows of 0/1, header = feature names.
std::string masks_csv(const ClusteringResult& result, const std::vector<std::string>& feature_names);

}  // namespace craft
