#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "craft/dataset.hpp"

namespace craft {

enum class InitKind { GlobalMean, RandomPoint };

// A reference centre for the probe: a categorical distribution per
// categorical slot and a value per numeric slot.
struct Reference {
  std::vector<std::vector<double>> categorical;
  std::vector<double> numeric;
};

// Per-point cost of a row against a singleton-style reference. Two shapes:
//   squared_euclidean: sum (x - r)^2 over numerics plus the squared distance
//     between the row's one-hot indicator and r on each categorical feature
//     (one mismatch against a one-hot reference costs 2);
//   craft: sum (x - r)^2 / 2 over numerics (sigma = 1) plus -log r(x) on each
//     categorical feature, with point references one-hot smoothed by
//     `pseudo_count` (pass the fit's smoothing to match its singleton cost).
class CostProbe {
 public:
  static CostProbe squared_euclidean();
  static CostProbe craft(double pseudo_count);

  Reference point_reference(const Dataset& data, std::size_t row) const;
  Reference mean_reference(const Dataset& data) const;
  double cost(const Dataset& data, std::size_t row, const Reference& ref) const;

  bool is_craft() const { return kind_ == Kind::Craft; }
  double pseudo_count() const { return pseudo_count_; }

 private:
  enum class Kind { SquaredEuclidean, Craft };
  CostProbe(Kind kind, double pseudo_count) : kind_(kind), pseudo_count_(pseudo_count) {}

  Kind kind_;
  double pseudo_count_;
};

struct FarthestFirstTrace {
  double lambda = 0.0;
  std::vector<std::size_t> chosen;  // rows added after the initial reference
  std::vector<double> distances;    // min-distance of each chosen row when added
};

// Seeds T with the global mean or a uniformly drawn row, then k-1 times adds
// the row farthest (by min probe cost) from T, ties to the lower row index.
// lambda is the distance of the last row added. Throws KTooLarge if k > N and
// InvalidArgument if k < 2.
FarthestFirstTrace farthest_first_trace(const Dataset& data, std::size_t k, const CostProbe& probe, InitKind init,
                                        std::uint64_t seed);
double farthest_first_lambda(const Dataset& data, std::size_t k, const CostProbe& probe, InitKind init,
                             std::uint64_t seed);

}  // namespace craft
