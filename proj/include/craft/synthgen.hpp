#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "craft/cluster_state.hpp"
#include "craft/dataset.hpp"

namespace craft::synth {

enum class SpecKind { Categorical, Numeric };

struct PlantedCluster {
  std::size_t rows = 0;
  std::vector<std::size_t> features;  // 0-based, any order, may overlap other clusters
  double signal_p = 0.9;              // categorical: P(x = 1) on planted features
  double signal_mean = 0.0;           // numeric: mean on planted features
};

struct SubspaceSpec {
  SpecKind kind = SpecKind::Categorical;
  std::size_t features = 0;  // D
  std::vector<PlantedCluster> clusters;
  double noise_p = 0.1;      // categorical background P(x = 1)
  double signal_sd = 1.0;    // numeric
  double noise_mean = 0.0;   // numeric
  double noise_sd = 3.0;     // numeric
  std::uint64_t seed = 0;

  // Throws SpecInvalid.
  void validate() const;
};

struct Synthetic {
  Dataset data;                  // carries the truth labels as well
  std::vector<std::int32_t> truth;
  std::vector<Mask> planted;     // one D-length mask per cluster
};

// Binary columns f1..fD with categories {"0","1"} plus a "label" column.
// Draws are row-major, feature-minor from one generator seeded with spec.seed.
Synthetic gen_categorical(const SubspaceSpec& spec);
Synthetic gen_numeric(const SubspaceSpec& spec);
Synthetic generate(const SubspaceSpec& spec);

SubspaceSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SubspaceSpec& spec);

// 300 x 24 binary, three clusters of 100 on disjoint 8-feature blocks.
SubspaceSpec categorical_disjoint(std::uint64_t seed);
// 300 x 36 Gaussian, clusters on features 1-12, 13-24, 22-34 (1-based) with
// means 1, 5, 10; background N(0, 3^2).
SubspaceSpec numeric_overlap(std::uint64_t seed);
// 300 x 24 binary with uneven subspaces: 9 and 16 features for the first two
// clusters and a third cluster of 8 split evenly over both.
SubspaceSpec categorical_uneven(std::uint64_t seed);
// Numeric counterpart of categorical_uneven with means 1, 5, 10.
SubspaceSpec numeric_uneven(std::uint64_t seed);

}  // namespace craft::synth
