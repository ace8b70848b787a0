#include "craft/lambda_select.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "craft/cluster_state.hpp"
#include "craft/error.hpp"

namespace craft {

CostProbe CostProbe::squared_euclidean() { return CostProbe(Kind::SquaredEuclidean, 0.0); }

CostProbe CostProbe::craft(double pseudo_count) {
  if (!(pseudo_count > 0.0)) throw Error(ErrorKind::InvalidArgument, "probe pseudo-count must be > 0");
  return CostProbe(Kind::Craft, pseudo_count);
}

Reference CostProbe::point_reference(const Dataset& data, std::size_t row) const {
  Reference ref;
  ref.categorical.resize(data.categorical_count());
  for (std::size_t s = 0; s < data.categorical_count(); ++s) {
    std::vector<std::size_t> counts(data.cardinality(s), 0);
    counts[static_cast<std::size_t>(data.code(row, s))] = 1;
    ref.categorical[s] = smoothed_frequencies(counts, 1, pseudo_count_);
  }
  ref.numeric.resize(data.numeric_count());
  for (std::size_t s = 0; s < data.numeric_count(); ++s) ref.numeric[s] = data.value(row, s);
  return ref;
}

Reference CostProbe::mean_reference(const Dataset& data) const {
  Reference ref;
  ref.categorical = global_categorical_means(data, kind_ == Kind::Craft ? pseudo_count_ : 0.0);
  ref.numeric.resize(data.numeric_count());
  for (std::size_t s = 0; s < data.numeric_count(); ++s) {
    double sum = 0.0;
    for (double v : data.numeric_column(s)) sum += v;
    ref.numeric[s] = sum / static_cast<double>(data.rows());
  }
  return ref;
}

double CostProbe::cost(const Dataset& data, std::size_t row, const Reference& ref) const {
  double total = 0.0;
  for (std::size_t s = 0; s < data.numeric_count(); ++s) {
    const double dev = data.value(row, s) - ref.numeric[s];
    total += kind_ == Kind::Craft ? 0.5 * dev * dev : dev * dev;
  }
  for (std::size_t s = 0; s < data.categorical_count(); ++s) {
    const auto x = static_cast<std::size_t>(data.code(row, s));
    const auto& r = ref.categorical[s];
    if (kind_ == Kind::Craft) {
      total -= std::log(r[x]);
    } else {
      for (std::size_t t = 0; t < r.size(); ++t) {
        const double dev = (t == x ? 1.0 : 0.0) - r[t];
        total += dev * dev;
      }
    }
  }
  return total;
}

FarthestFirstTrace farthest_first_trace(const Dataset& data, std::size_t k, const CostProbe& probe, InitKind init,
                                        std::uint64_t seed) {
  const std::size_t N = data.rows();
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "farthest-first needs a target count k >= 2");
  if (k > N)
    throw Error(ErrorKind::KTooLarge, "target count " + std::to_string(k) + " exceeds N = " + std::to_string(N));

  Reference first;
  if (init == InitKind::RandomPoint) {
    std::mt19937_64 rng(seed);
    first = probe.point_reference(data, std::uniform_int_distribution<std::size_t>(0, N - 1)(rng));
  } else {
    first = probe.mean_reference(data);
  }
  std::vector<double> nearest(N);
  for (std::size_t n = 0; n < N; ++n) nearest[n] = probe.cost(data, n, first);

  FarthestFirstTrace trace;
  for (std::size_t round = 1; round < k; ++round) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < N; ++n)
      if (nearest[n] > nearest[best]) best = n;
    trace.chosen.push_back(best);
    trace.distances.push_back(nearest[best]);
    const auto ref = probe.point_reference(data, best);
    for (std::size_t n = 0; n < N; ++n) nearest[n] = std::min(nearest[n], probe.cost(data, n, ref));
  }
  trace.lambda = trace.distances.back();
  return trace;
}

double farthest_first_lambda(const Dataset& data, std::size_t k, const CostProbe& probe, InitKind init,
                             std::uint64_t seed) {
  return farthest_first_trace(data, k, probe, init, seed).lambda;
}

}  // namespace craft
