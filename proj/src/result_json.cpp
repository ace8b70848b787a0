#include "craft/result_json.hpp"

#include <sstream>

#include "craft/metrics.hpp"

namespace craft {

using nlohmann::json;

json result_to_json(const ClusteringResult& result, const RunInfo& info, const Dataset& data) {
  json masks = json::array();
  for (const auto& c : result.state.clusters) {
    json row = json::array();
    for (auto v : c.mask) row.push_back(static_cast<int>(v));
    masks.push_back(std::move(row));
  }
  json j = {
      {"algorithm", info.algorithm},
      {"k", result.clusters()},
      {"assignments", result.state.z},
      {"masks", masks},
      {"feature_names", info.feature_names},
      {"objective", result.objective},
      {"objective_trace", result.objective_trace},
      {"iterations", result.iterations},
      {"converged", result.converged},
      {"lambda_used", info.lambda_used},
      {"seed", info.seed},
      {"hyperparams", info.hyperparams},
  };
  if (data.has_labels()) {
    j["metrics"] = {{"purity", metrics::purity(result.state.z, data.labels())},
                    {"nmi", metrics::nmi(result.state.z, data.labels())}};
  }
  return j;
}

std::string masks_csv(const ClusteringResult& result, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  for (std::size_t d = 0; d < feature_names.size(); ++d) out << (d ? "," : "") << feature_names[d];
  out << '\n';
  for (const auto& c : result.state.clusters) {
    for (std::size_t d = 0; d < c.mask.size(); ++d) out << (d ? "," : "") << static_cast<int>(c.mask[d]);
    out << '\n';
  }
  return out.str();
}

}  // namespace craft
