#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "craft/cluster_state.hpp"

namespace craft::metrics {

// counts[i][j]: rows with predicted cluster i and true label j. Ids are
// compacted to 0..I-1 / 0..J-1 in order of first appearance.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> row_totals;
  std::vector<std::size_t> col_totals;
  std::size_t total = 0;

  static ContingencyTable build(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth);
};

double purity(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth);

// MI / sqrt(H(pred) H(truth)), natural logs. Both entropies zero: 1 when
// the partitions agree (they always do then). Exactly one zero: 0.
double nmi(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth);

// Jaccard similarity; two empty masks count as identical.
double jaccard(const Mask& a, const Mask& b);

// Best one-to-one matching of planted to recovered clusters maximising the
// mean Jaccard similarity. The mean runs over max(K, K') clusters, so
// unmatched clusters on either side score 0.
double mask_recovery(const std::vector<Mask>& planted, const std::vector<Mask>& recovered);

// Maximum-weight assignment on a rectangular score matrix (Hungarian method).
// Returns, for each row, the matched column or -1.
std::vector<std::int32_t> max_weight_matching(const std::vector<std::vector<double>>& score);

}  // namespace craft::metrics
