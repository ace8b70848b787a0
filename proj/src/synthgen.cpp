#include "craft/synthgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "craft/error.hpp"

namespace craft::synth {

using nlohmann::json;

void SubspaceSpec::validate() const {
  if (features == 0) throw Error(ErrorKind::SpecInvalid, "spec needs at least one feature");
  if (clusters.empty()) throw Error(ErrorKind::SpecInvalid, "spec needs at least one cluster");
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& pc = clusters[c];
    const auto where = "cluster " + std::to_string(c + 1);
    if (pc.rows == 0) throw Error(ErrorKind::SpecInvalid, where + " has no rows");
    std::vector<bool> seen(features, false);
    for (auto f : pc.features) {
      if (f >= features) throw Error(ErrorKind::SpecInvalid, where + " references feature " + std::to_string(f) + " >= D");
      if (seen[f]) throw Error(ErrorKind::SpecInvalid, where + " lists feature " + std::to_string(f) + " twice");
      seen[f] = true;
    }
    if (kind == SpecKind::Categorical && !(pc.signal_p >= 0.0 && pc.signal_p <= 1.0))
      throw Error(ErrorKind::SpecInvalid, where + " signal_p outside [0, 1]");
    if (kind == SpecKind::Numeric && !std::isfinite(pc.signal_mean))
      throw Error(ErrorKind::SpecInvalid, where + " signal_mean not finite");
  }
  if (kind == SpecKind::Categorical && !(noise_p >= 0.0 && noise_p <= 1.0))
    throw Error(ErrorKind::SpecInvalid, "noise_p outside [0, 1]");
  if (kind == SpecKind::Numeric) {
    if (!(signal_sd >= 0.0) || !std::isfinite(signal_sd)) throw Error(ErrorKind::SpecInvalid, "signal_sd must be >= 0");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error(ErrorKind::SpecInvalid, "noise_sd must be >= 0");
    if (!std::isfinite(noise_mean)) throw Error(ErrorKind::SpecInvalid, "noise_mean not finite");
  }
}

namespace {

std::vector<Mask> planted_masks(const SubspaceSpec& spec) {
  std::vector<Mask> out;
  for (const auto& pc : spec.clusters) {
    Mask m(spec.features, 0);
    for (auto f : pc.features) m[f] = 1;
    out.push_back(std::move(m));
  }
  return out;
}

Schema make_schema(const SubspaceSpec& spec) {
  Schema schema;
  for (std::size_t d = 0; d < spec.features; ++d) {
    auto name = "f" + std::to_string(d + 1);
    schema.columns.push_back(spec.kind == SpecKind::Categorical ? Column::categorical(std::move(name), {"0", "1"})
                                                                : Column::numeric(std::move(name)));
  }
  schema.label_column = "label";
  return schema;
}

std::vector<std::string> label_names(const SubspaceSpec& spec) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) out.push_back("c" + std::to_string(c + 1));
  return out;
}

std::size_t total_rows(const SubspaceSpec& spec) {
  std::size_t n = 0;
  for (const auto& pc : spec.clusters) n += pc.rows;
  return n;
}

}  // namespace

Synthetic gen_categorical(const SubspaceSpec& spec) {
  spec.validate();
  if (spec.kind != SpecKind::Categorical) throw Error(ErrorKind::SpecInvalid, "spec is not categorical");
  const auto planted = planted_masks(spec);
  const std::size_t N = total_rows(spec);
  std::vector<std::vector<std::int32_t>> cols(spec.features, std::vector<std::int32_t>(N));
  std::vector<std::int32_t> truth(N);
  std::mt19937_64 rng(spec.seed);
  std::size_t n = 0;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    std::bernoulli_distribution signal(spec.clusters[c].signal_p), noise(spec.noise_p);
    for (std::size_t r = 0; r < spec.clusters[c].rows; ++r, ++n) {
      truth[n] = static_cast<std::int32_t>(c);
      for (std::size_t d = 0; d < spec.features; ++d) cols[d][n] = (planted[c][d] ? signal(rng) : noise(rng)) ? 1 : 0;
    }
  }
  Dataset data(make_schema(spec), N, std::move(cols), {}, truth, label_names(spec));
  return Synthetic{std::move(data), std::move(truth), planted};
}

Synthetic gen_numeric(const SubspaceSpec& spec) {
  spec.validate();
  if (spec.kind != SpecKind::Numeric) throw Error(ErrorKind::SpecInvalid, "spec is not numeric");
  const auto planted = planted_masks(spec);
  const std::size_t N = total_rows(spec);
  std::vector<std::vector<double>> cols(spec.features, std::vector<double>(N));
  std::vector<std::int32_t> truth(N);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::size_t n = 0;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    for (std::size_t r = 0; r < spec.clusters[c].rows; ++r, ++n) {
      truth[n] = static_cast<std::int32_t>(c);
      for (std::size_t d = 0; d < spec.features; ++d) {
        const double e = unit(rng);
        cols[d][n] = planted[c][d] ? spec.clusters[c].signal_mean + spec.signal_sd * e : spec.noise_mean + spec.noise_sd * e;
      }
    }
  }
  Dataset data(make_schema(spec), N, {}, std::move(cols), truth, label_names(spec));
  return Synthetic{std::move(data), std::move(truth), planted};
}

Synthetic generate(const SubspaceSpec& spec) {
  return spec.kind == SpecKind::Categorical ? gen_categorical(spec) : gen_numeric(spec);
}

SubspaceSpec spec_from_json(const json& j) {
  try {
    SubspaceSpec spec;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "categorical")
      spec.kind = SpecKind::Categorical;
    else if (kind == "numeric")
      spec.kind = SpecKind::Numeric;
    else
      throw Error(ErrorKind::SpecInvalid, "unknown spec kind '" + kind + "'");
    spec.features = j.at("features").get<std::size_t>();
    spec.noise_p = j.value("noise_p", spec.noise_p);
    spec.signal_sd = j.value("signal_sd", spec.signal_sd);
    spec.noise_mean = j.value("noise_mean", spec.noise_mean);
    spec.noise_sd = j.value("noise_sd", spec.noise_sd);
    spec.seed = j.value("seed", spec.seed);
    for (const auto& c : j.at("clusters")) {
      PlantedCluster pc;
      pc.rows = c.at("rows").get<std::size_t>();
      pc.features = c.at("features").get<std::vector<std::size_t>>();
      pc.signal_p = c.value("signal_p", pc.signal_p);
      pc.signal_mean = c.value("signal_mean", pc.signal_mean);
      spec.clusters.push_back(std::move(pc));
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SpecInvalid, std::string("malformed spec: ") + e.what());
  }
}

json spec_to_json(const SubspaceSpec& spec) {
  json clusters = json::array();
  for (const auto& pc : spec.clusters) {
    json c = {{"rows", pc.rows}, {"features", pc.features}};
    if (spec.kind == SpecKind::Categorical)
      c["signal_p"] = pc.signal_p;
    else
      c["signal_mean"] = pc.signal_mean;
    clusters.push_back(std::move(c));
  }
  json j = {{"kind", spec.kind == SpecKind::Categorical ? "categorical" : "numeric"},
            {"features", spec.features},
            {"clusters", clusters},
            {"seed", spec.seed}};
  if (spec.kind == SpecKind::Categorical) {
    j["noise_p"] = spec.noise_p;
  } else {
    j["signal_sd"] = spec.signal_sd;
    j["noise_mean"] = spec.noise_mean;
    j["noise_sd"] = spec.noise_sd;
  }
  return j;
}

namespace {

std::vector<std::size_t> range(std::size_t first, std::size_t last) {  // inclusive, 0-based
  std::vector<std::size_t> out;
  for (std::size_t f = first; f <= last; ++f) out.push_back(f);
  return out;
}

std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

SubspaceSpec categorical_disjoint(std::uint64_t seed) {
  SubspaceSpec spec;
  spec.kind = SpecKind::Categorical;
  spec.features = 24;
  spec.noise_p = 0.1;
  spec.seed = seed;
  spec.clusters = {{100, range(0, 7), 0.9, 0.0}, {100, range(8, 15), 0.9, 0.0}, {100, range(16, 23), 0.9, 0.0}};
  return spec;
}

SubspaceSpec numeric_overlap(std::uint64_t seed) {
  SubspaceSpec spec;
  spec.kind = SpecKind::Numeric;
  spec.features = 36;
  spec.signal_sd = 1.0;
  spec.noise_mean = 0.0;
  spec.noise_sd = 3.0;
  spec.seed = seed;
  spec.clusters = {{100, range(0, 11), 0.9, 1.0}, {100, range(12, 23), 0.9, 5.0}, {100, range(21, 33), 0.9, 10.0}};
  return spec;
}

SubspaceSpec categorical_uneven(std::uint64_t seed) {
  SubspaceSpec spec;
  spec.kind = SpecKind::Categorical;
  spec.features = 24;
  spec.noise_p = 0.1;
  spec.seed = seed;
  spec.clusters = {{100, range(0, 8), 1.0, 0.0},
                   {100, range(8, 23), 1.0, 0.0},
                   {100, join(range(2, 5), range(12, 15)), 1.0, 0.0}};
  return spec;
}

SubspaceSpec numeric_uneven(std::uint64_t seed) {
  SubspaceSpec spec;
  spec.kind = SpecKind::Numeric;
  spec.features = 24;
  spec.signal_sd = 1.0;
  spec.noise_mean = 0.0;
  spec.noise_sd = 3.0;
  spec.seed = seed;
  spec.clusters = {{100, range(0, 8), 0.9, 1.0},
                   {100, range(8, 23), 0.9, 5.0},
                   {100, join(range(2, 5), range(12, 15)), 0.9, 10.0}};
  return spec;
}

}  // namespace craft::synth
