#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "craft/baselines.hpp"
#include "craft/engine.hpp"
#include "craft/error.hpp"
#include "craft/io.hpp"
#include "craft/lambda_select.hpp"
#include "craft/result_json.hpp"
#include "craft/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace craft;

namespace {

struct FitArgs {
  std::string data, schema, algorithm = "craft";
  std::optional<double> lambda;
  std::optional<std::size_t> target_k;
  double m = 0.5;
  std::optional<double> rho;
  std::string mode = "fixed";
  double eps_c = 0.9, eps_v = 4.0;
  std::uint64_t seed = 0;
  int max_iters = 100;
  double smoothing = kDefaultSmoothing;
  std::string out, masks_out, sweep;
  bool one_hot = false;
};

struct GenArgs {
  std::string spec, preset, data_out, schema_out;
  std::uint64_t seed = 0;
};

// One cell of a sweep (or the single run).
struct Job {
  double m, eps_c, eps_v;
  std::uint64_t seed;
  fs::path out, masks_out;
};

json error_json(const std::string& kind, const std::string& message, std::optional<std::size_t> row = {},
                std::optional<std::string> column = {}) {
  json e = {{"kind", kind}, {"message", message}};
  if (row) e["row"] = *row;
  if (column) e["column"] = *column;
  return {{"error", e}};
}

json error_json(const Error& e) { return error_json(std::string(to_string(e.kind())), e.what(), e.row(), e.column()); }

std::mutex err_mu;
void report(const json& j) {
  std::lock_guard lock(err_mu);
  std::cerr << j.dump() << '\n';
}

Dataset prepare(const FitArgs& a) {
  Dataset data = io::load_dataset(a.data, a.schema);
  const bool euclid = a.algorithm == "dpmeans" || a.algorithm == "dpmeans-r" || a.algorithm == "dprf";
  if (euclid) {
    if (a.one_hot) data = one_hot_encode(data);
    require_numeric(data);
  } else if (a.algorithm == "binary-entropy") {
    require_binary(data);
  }
  return data;
}

double pick_lambda(const FitArgs& a, const Dataset& data, std::uint64_t seed, json& source) {
  if (a.lambda) {
    source = {{"kind", "explicit"}};
    return *a.lambda;
  }
  const bool euclid = a.algorithm == "dpmeans" || a.algorithm == "dpmeans-r" || a.algorithm == "dprf";
  const CostProbe probe = euclid ? CostProbe::squared_euclidean() : CostProbe::craft(a.smoothing);
  const InitKind init = a.algorithm == "dpmeans" ? InitKind::GlobalMean : InitKind::RandomPoint;
  source = {{"kind", "farthest_first"},
            {"target_k", *a.target_k},
            {"probe", euclid ? "squared_euclidean" : "craft"},
            {"init", init == InitKind::GlobalMean ? "global_mean" : "random_point"}};
  if (!euclid) source["probe_pseudo_count"] = a.smoothing;
  return farthest_first_lambda(data, *a.target_k, probe, init, seed);
}

void run_job(const FitArgs& a, const Dataset& data, const Job& job) {
  json source;
  const double lambda = pick_lambda(a, data, job.seed, source);
  json hp = {{"m", job.m}, {"smoothing", a.smoothing}, {"max_iters", a.max_iters}, {"lambda_source", source},
             {"one_hot", a.one_hot}};
  ClusteringResult result;
  if (a.algorithm == "craft") {
    Hyperparams h;
    h.lambda = lambda;
    h.m = job.m;
    h.rho = a.rho;
    h.mode = a.mode == "approx" ? BudgetMode::Approx : BudgetMode::Fixed;
    h.eps_c = job.eps_c;
    h.eps_v = job.eps_v;
    h.smoothing = a.smoothing;
    h.max_iters = a.max_iters;
    h.seed = job.seed;
    h.validate();
    result = craft_fit(data, h);
    hp["rho"] = resolve_rho(job.m, a.rho);
    hp["mode"] = a.mode;
    if (h.mode == BudgetMode::Approx) {
      hp["eps_c"] = job.eps_c;
      hp["eps_v"] = job.eps_v;
    }
  } else if (a.algorithm == "dpmeans" || a.algorithm == "dpmeans-r") {
    result = dpmeans_fit(data, lambda, a.algorithm == "dpmeans" ? InitKind::GlobalMean : InitKind::RandomPoint,
                         job.seed, a.max_iters);
    hp.erase("m");
  } else if (a.algorithm == "dprf") {
    result = dprf_fit(data, lambda, job.m, a.rho, job.seed, a.max_iters);
    if (job.m < 1.0) hp["rho"] = resolve_rho(job.m, a.rho);
  } else {
    result = binary_entropy_fit(data, lambda, job.seed, a.max_iters, a.smoothing);
    hp.erase("m");
  }
  RunInfo info{a.algorithm, lambda, job.seed, data.feature_names(), hp};
  const json out = result_to_json(result, info, data);
  if (!job.masks_out.empty()) io::write_file_atomic(job.masks_out, masks_csv(result, info.feature_names));
  io::write_file_atomic(job.out, out.dump(2) + "\n");
}

template <class T>
std::vector<T> grid(const json& sweep, const char* key, T fallback) {
  if (!sweep.contains(key)) return {fallback};
  const auto& arr = sweep.at(key);
  if (!arr.is_array() || arr.empty())
    throw Error(ErrorKind::Config, std::string("sweep grid '") + key + "' must be a nonempty array");
  return arr.get<std::vector<T>>();
}

fs::path indexed(const fs::path& base, std::size_t i) {
  fs::path p = base;
  p.replace_filename(base.stem().string() + "-" + std::to_string(i) + base.extension().string());
  return p;
}

std::vector<Job> plan(const FitArgs& a) {
  if (a.sweep.empty()) return {{a.m, a.eps_c, a.eps_v, a.seed, a.out, a.masks_out}};
  json sweep;
  try {
    sweep = json::parse(io::read_file(a.sweep));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "sweep file " + a.sweep + ": " + e.what());
  }
  if (!sweep.is_object()) throw Error(ErrorKind::Config, "sweep file must hold a JSON object");
  for (const auto& [key, _] : sweep.items())
    if (key != "m" && key != "eps_c" && key != "eps_v" && key != "seeds")
      throw Error(ErrorKind::Config, "unknown sweep grid '" + key + "'");
  std::vector<Job> jobs;
  try {
    for (double m : grid(sweep, "m", a.m))
      for (double ec : grid(sweep, "eps_c", a.eps_c))
        for (double ev : grid(sweep, "eps_v", a.eps_v))
          for (auto s : grid<std::uint64_t>(sweep, "seeds", a.seed)) {
            const auto i = jobs.size();
            jobs.push_back({m, ec, ev, s, indexed(a.out, i), a.masks_out.empty() ? fs::path{} : indexed(a.masks_out, i)});
          }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("sweep grid: ") + e.what());
  }
  return jobs;
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CRAFT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

int run_fit(const FitArgs& a) {
  if (a.algorithm != "craft" && a.algorithm != "dpmeans" && a.algorithm != "dpmeans-r" && a.algorithm != "dprf" &&
      a.algorithm != "binary-entropy")
    throw Error(ErrorKind::Config, "unknown algorithm '" + a.algorithm + "'");
  if (a.mode != "fixed" && a.mode != "approx") throw Error(ErrorKind::Config, "--mode must be fixed or approx");
  if (a.lambda.has_value() == a.target_k.has_value())
    throw Error(ErrorKind::Config, "exactly one of --lambda and --target-k is required");
  if (a.lambda && !(*a.lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "--lambda must be >= 0");

  const auto jobs = plan(a);
  const Dataset data = prepare(a);

  std::atomic<std::size_t> next{0}, failed{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        run_job(a, data, jobs[i]);
      } catch (const Error& e) {
        ++failed;
        report(error_json(e));
      } catch (const std::exception& e) {
        ++failed;
        report(error_json("Internal", e.what()));
      }
    }
  };
  const unsigned n = std::min<std::size_t>(thread_cap(), jobs.size());
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return failed ? 1 : 0;
}

int run_generate(const GenArgs& g) {
  if (g.spec.empty() == g.preset.empty()) throw Error(ErrorKind::Config, "exactly one of --spec and --preset is required");
  synth::SubspaceSpec spec;
  if (!g.spec.empty()) {
    try {
      spec = synth::spec_from_json(json::parse(io::read_file(g.spec)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::SpecInvalid, "spec file " + g.spec + ": " + e.what());
    }
  } else if (g.preset == "categorical_disjoint") {
    spec = synth::categorical_disjoint(g.seed);
  } else if (g.preset == "numeric_overlap") {
    spec = synth::numeric_overlap(g.seed);
  } else if (g.preset == "categorical_uneven") {
    spec = synth::categorical_uneven(g.seed);
  } else if (g.preset == "numeric_uneven") {
    spec = synth::numeric_uneven(g.seed);
  } else {
    throw Error(ErrorKind::Config, "unknown preset '" + g.preset + "'");
  }
  const auto s = synth::generate(spec);
  io::emit(s.data, g.data_out, g.schema_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace clustering of mixed categorical and numeric data"};
  app.require_subcommand(1);

  FitArgs f;
  auto* fit = app.add_subcommand("fit", "cluster a dataset");
  fit->add_option("--data", f.data, "CSV file")->required();
  fit->add_option("--schema", f.schema, "schema JSON")->required();
  fit->add_option("--algorithm", f.algorithm, "craft|dpmeans|dpmeans-r|dprf|binary-entropy")->capture_default_str();
  auto* lam = fit->add_option("--lambda", f.lambda, "cluster penalty");
  fit->add_option("--target-k", f.target_k, "choose lambda by farthest-first for this many clusters")->excludes(lam);
  fit->add_option("--m", f.m, "expected fraction of selected features")->capture_default_str();
  fit->add_option("--rho", f.rho, "prior variance of feature probabilities (default auto)");
  fit->add_option("--mode", f.mode, "fixed|approx")->capture_default_str();
  fit->add_option("--eps-c", f.eps_c, "approx categorical threshold")->capture_default_str();
  fit->add_option("--eps-v", f.eps_v, "approx numeric variance threshold")->capture_default_str();
  fit->add_option("--seed", f.seed)->capture_default_str();
  fit->add_option("--max-iters", f.max_iters)->capture_default_str();
  fit->add_option("--smoothing", f.smoothing, "categorical pseudo-count")->capture_default_str();
  fit->add_option("--out", f.out, "result JSON path")->required();
  fit->add_option("--masks-out", f.masks_out, "mask matrix CSV path");
  fit->add_option("--sweep", f.sweep, "JSON with optional lists m, eps_c, eps_v, seeds");
  fit->add_flag("--one-hot", f.one_hot, "one-hot encode categorical columns for Euclidean baselines");

  GenArgs g;
  auto* gen = app.add_subcommand("generate", "write a synthetic planted-subspace dataset");
  gen->add_option("--spec", g.spec, "generator spec JSON");
  gen->add_option("--preset", g.preset,
                  "categorical_disjoint|numeric_overlap|categorical_uneven|numeric_uneven");
  gen->add_option("--seed", g.seed, "preset seed")->capture_default_str();
  gen->add_option("--data-out", g.data_out)->required();
  gen->add_option("--schema-out", g.schema_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report(error_json("Config", e.what()));
    return 2;
  }

  try {
    return fit->parsed() ? run_fit(f) : run_generate(g);
  } catch (const Error& e) {
    report(error_json(e));
    return 2;
  } catch (const std::exception& e) {
    report(error_json("Internal", e.what()));
    return 2;
  }
}
