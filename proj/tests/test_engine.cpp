#include <doctest.h>

#include <cmath>
#include <random>

#include "craft/constants.hpp"
#include "craft/engine.hpp"
#include "craft/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace craft;

TEST_CASE("F constants against high-precision values") {
  struct Row {
    double m, rho, a0, b0, F0, F1;
  };
  // mpmath at 40 digits
  const Row rows[] = {
      {0.5, 0.24, 0.020833333333333333, 1.0208333333333333, 0.10212407633305415, 0.10212407633305415},
      {1.0 / 3.0, 2.0 / 9.0 - 0.01, 0.015706806282722513, 1.031413612565445, 0.081552365875493563, 0.14109127558090758},
      {0.2, 0.05, 0.44, 2.76, 1.2812773582367022, 2.2020442038834831},
      {0.8, 0.1, 0.48, 1.12, 0.97738288328782954, 0.42621514122867274},
  };
  for (const auto& r : rows) {
    const auto fc = compute_f_constants(r.m, r.rho);
    CHECK(fc.a0 == doctest::Approx(r.a0).epsilon(1e-12));
    CHECK(fc.b0 == doctest::Approx(r.b0).epsilon(1e-12));
    CHECK(fc.F0 == doctest::Approx(r.F0).epsilon(1e-10));
    CHECK(fc.F1 == doctest::Approx(r.F1).epsilon(1e-10));
    CHECK(fc.a1 == fc.a0 + 1.0);
    CHECK(fc.b1 == fc.b0 - 1.0);
  }
}

TEST_CASE("rho domain") {
  CHECK_THROWS_AS(compute_f_constants(0.5, 0.25), Error);
  CHECK_THROWS_AS(compute_f_constants(0.5, 0.0), Error);
  CHECK_THROWS_AS(compute_f_constants(1.0, 0.1), Error);
  try {
    compute_f_constants(0.5, 0.25);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RhoOutOfRange);
  }
  CHECK(resolve_rho(0.5, std::nullopt) == doctest::Approx(0.24));
  CHECK(resolve_rho(0.02, std::nullopt) == doctest::Approx(0.01));
  CHECK_THROWS_AS(resolve_rho(0.01, std::nullopt), Error);  // 0.01 >= m(1-m)
  CHECK(resolve_rho(0.5, 0.1) == 0.1);
}

TEST_CASE("nu point estimate") {
  CHECK(nu_point_estimate(0.5, 0.24, 1) == doctest::Approx(0.98));
  CHECK(nu_point_estimate(0.3, 1e-12, 1) == doctest::Approx(0.3));
  CHECK(nu_point_estimate(0.3, 0.21 - 1e-12, 1) == doctest::Approx(1.0));
  CHECK(nu_point_estimate(0.3, 0.21 - 1e-12, 0) == doctest::Approx(0.0));
}

TEST_CASE("point_cost examples") {
  SUBCASE("zero at the centre with m = 0.5") {
    const auto data = fx::numeric({{1.0, 2.0}, {3.0, 4.0}});
    auto st = fx::state_for(data, {0, 0}, 1);
    st.clusters[0].stats.zeta = {1.0, 2.0};
    st.clusters[0].mask = {1, 1};
    CHECK(point_cost(data, 0, st, 0, compute_f_constants(0.5, 0.2)) == doctest::Approx(0.0));
    const auto fc = compute_f_constants(0.3, 0.1);
    CHECK(point_cost(data, 1, st, 0, fc) ==
          doctest::Approx((4.0 + 4.0) / (2.0 * st.clusters[0].stats.sigma[0] * st.clusters[0].stats.sigma[0]) +
                          2.0 * fc.F_delta));
  }
  SUBCASE("ln 2 on an even binary feature") {
    const auto data = fx::binary({{0}, {1}});
    auto st = fx::state_for(data, {0, 0}, 1);
    st.clusters[0].mask = {1};
    CHECK(point_cost(data, 0, st, 0, compute_f_constants(0.5, 0.2)) == doctest::Approx(std::log(2.0)));
  }
  SUBCASE("unselected numeric features are free") {
    const auto data = fx::numeric({{100.0}, {0.0}});
    auto st = fx::state_for(data, {0, 1}, 2);
    CHECK(point_cost(data, 0, st, 1, compute_f_constants(0.4, 0.1)) == 0.0);
  }
}

TEST_CASE("new cluster feature probability") {
  const double m = 0.5, rho = 0.24;
  const auto fc = compute_f_constants(m, rho);
  ClusterState st;
  st.clusters.resize(2);
  st.clusters[0].mask = {0, 0, 1};
  st.clusters[1].mask = {0, 1, 1};
  CHECK(new_cluster_feature_prob(0, st, fc) == doctest::Approx(nu_point_estimate(m, rho, 0)));
  CHECK(new_cluster_feature_prob(2, st, fc) == doctest::Approx(nu_point_estimate(m, rho, 1)));
  CHECK(new_cluster_feature_prob(1, st, fc) == doctest::Approx((2 * fc.a0 + 1) / (2 * (fc.a0 + fc.b0))));
  CHECK(new_cluster_feature_prob(1, st, fc) == doctest::Approx(0.5));
}

TEST_CASE("g values") {
  SUBCASE("identical distributions give zero gain") {
    const auto data = fx::binary({{0}, {1}, {0}, {1}});
    const auto st = fx::state_for(data, {0, 0, 0, 0}, 1);
    CHECK(g_values(data, 0, 0, st).gain() == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("pure cluster against uniform gains N_k ln 2") {
    const auto data = fx::binary({{1}, {1}, {1}, {0}, {0}, {0}});
    const auto st = fx::state_for(data, {0, 0, 0, 1, 1, 1}, 2, 1e-12);
    CHECK(g_values(data, 0, 0, st).gain() == doctest::Approx(3 * std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("cross-entropy dominates entropy") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
      std::vector<std::vector<int>> rows(8, std::vector<int>(2));
      for (auto& r : rows)
        for (auto& v : r) v = static_cast<int>(rng() % 2);
      const auto data = fx::binary(rows);
      const auto st = fx::state_for(data, fx::random_cover(rng, 8, 2), 2, 1e-12);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t d = 0; d < 2; ++d) CHECK(g_values(data, k, d, st).gain() >= -1e-9);
    }
  }
}

TEST_CASE("budget rounding") {
  CHECK(budget_count(1.0 / 3.0, 24) == 8);
  CHECK(budget_count(1.0 / 3.0, 36) == 12);
  CHECK(budget_count(0.5, 3) == 2);
  CHECK(budget_count(0.25, 2) == 1);
  CHECK(budget_count(0.2, 2) == 0);
  CHECK(budget_count(1.0, 5) == 5);
}

TEST_CASE("select_features_fixed examples") {
  SUBCASE("m = 1 keeps everything") {
    const auto data = fx::numeric({{1, 2, 3}, {4, 5, 7}});
    const auto st = fx::state_for(data, {0, 0}, 1);
    CHECK(select_features_fixed(st, data, 0, 1.0) == Mask{1, 1, 1});
  }
  SUBCASE("lowest sigma wins") {
    const auto data = fx::numeric({{0, 0, 0}});
    auto st = fx::state_for(data, {0}, 1);
    st.clusters[0].stats.sigma = {0.1, 5.0, 2.0};
    CHECK(select_features_fixed(st, data, 0, 1.0 / 3.0) == Mask{1, 0, 0});
  }
  SUBCASE("equal gains go to the lower index") {
    // both features pure in the cluster and even globally
    const auto data = fx::binary({{1, 1}, {1, 1}, {0, 0}, {0, 0}});
    const auto st = fx::state_for(data, {0, 0, 1, 1}, 2);
    CHECK(select_features_fixed(st, data, 0, 0.5) == Mask{1, 0});
    // brute force: both budget-1 masks reach the same objective
    const auto fc = compute_f_constants(0.5, 0.2);
    auto a = st, b = st;
    a.clusters[0].mask = {1, 0};
    b.clusters[0].mask = {0, 1};
    CHECK(objective_value(data, a, 1.0, fc) == doctest::Approx(objective_value(data, b, 1.0, fc)));
  }
}

TEST_CASE("select_features_approx examples") {
  const auto data = fx::numeric({{0, 0}});
  auto st = fx::state_for(data, {0}, 1);
  st.clusters[0].stats.sigma = {1.0, 3.0};
  CHECK(select_features_approx(st, data, 0, 0.9, 4.0) == Mask{1, 0});
  const auto cat = fx::binary({{1}, {1}, {0}, {1}});
  const auto cs = fx::state_for(cat, {0, 0, 1, 1}, 2);
  CHECK(select_features_approx(cs, cat, 1, 1.0 - 1e-12, 4.0) == Mask{0});
}

TEST_CASE("objective specialisations") {
  const auto data = fx::binary({{0, 1}, {1, 1}, {0, 0}});
  auto st = fx::state_for(data, {0, 0, 0}, 1);
  const auto fc = compute_f_constants(0.4, 0.1);
  double expected = 2.5 + static_cast<double>(data.features()) * fc.F0;
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t s = 0; s < 2; ++s) expected -= std::log(st.eta0[s][static_cast<std::size_t>(data.code(n, s))]);
  CHECK(objective_value(data, st, 2.5, fc) == doctest::Approx(expected));
}

TEST_CASE("property: objective decomposes into point costs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = fx::random_mixed(rng, 3 + rng() % 8, 1 + rng() % 5);
    const std::size_t K = 1 + rng() % 3;
    if (K > data.rows()) continue;
    auto st = fx::state_for(data, fx::random_cover(rng, data.rows(), K), K);
    for (auto& c : st.clusters)
      for (auto& v : c.mask) v = static_cast<std::uint8_t>(rng() % 2);
    const auto [m, rho] = fx::random_m_rho(rng);
    const auto fc = compute_f_constants(m, rho);
    const double lambda = 3.0;
    double sum = 0.0;
    for (std::size_t n = 0; n < data.rows(); ++n) sum += point_cost(data, n, st, static_cast<std::size_t>(st.z[n]), fc);
    // per-point costs carry F_delta once per row; the objective once per cluster
    double correction = 0.0;
    for (std::size_t n = 0; n < data.rows(); ++n) {
      const auto& mask = st.clusters[static_cast<std::size_t>(st.z[n])].mask;
      correction += static_cast<double>(std::count(mask.begin(), mask.end(), 1)) * fc.F_delta;
    }
    double per_cluster = 0.0;
    for (const auto& c : st.clusters) per_cluster += static_cast<double>(std::count(c.mask.begin(), c.mask.end(), 1));
    const double rebuilt = sum - correction + (lambda + static_cast<double>(data.features()) * fc.F0) * K +
                           per_cluster * fc.F_delta;
    CHECK(objective_value(data, st, lambda, fc) == doctest::Approx(rebuilt).epsilon(1e-12));
  }
}

TEST_CASE("property: mean optimality with sigma and masks fixed") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto data = fx::random_mixed(rng, 4 + rng() % 8, 1 + rng() % 5);
    const std::size_t K = 1 + rng() % 3;
    auto st = fx::state_for(data, fx::random_cover(rng, data.rows(), K), K);
    for (auto& c : st.clusters)
      for (auto& v : c.mask) v = static_cast<std::uint8_t>(rng() % 2);
    const auto fc = compute_f_constants(0.5, 0.2);
    const double best = objective_value(data, st, 1.0, fc);
    auto perturbed = st;
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (auto& c : perturbed.clusters) {
      for (auto& z : c.stats.zeta) z += jitter(rng);
      for (auto& dist : c.stats.eta) {
        double sum = 0;
        for (auto& p : dist) sum += (p = p + std::abs(jitter(rng)));
        for (auto& p : dist) p /= sum;
      }
    }
    CHECK(objective_value(data, perturbed, 1.0, fc) >= best - 1e-6);
  }
}

TEST_CASE("property: greedy masks reach the exhaustive optimum") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto data = fx::random_mixed(rng, 5 + rng() % 6, 2 + rng() % 5);
    const std::size_t K = 1 + rng() % 2;
    auto st = fx::state_for(data, fx::random_cover(rng, data.rows(), K), K);
    const auto [m, rho] = fx::random_m_rho(rng);
    const auto fc = compute_f_constants(m, rho);
    for (std::size_t k = 0; k < K; ++k) st.clusters[k].mask = select_features_fixed(st, data, k, m);
    const double greedy = objective_value(data, st, 1.0, fc);
    const auto options = oracle::budget_masks(data, budget_count(m, data.numeric_count()),
                                              budget_count(m, data.categorical_count()));
    for (std::size_t k = 0; k < K; ++k) {
      auto trial_state = st;
      for (const auto& mask : options) {
        trial_state.clusters[k].mask = mask;
        CHECK(objective_value(data, trial_state, 1.0, fc) >= greedy - 1e-9);
      }
    }
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("craft_fit limits") {
  const auto data = fx::binary({{0, 1}, {1, 1}, {0, 0}, {1, 0}, {1, 1}});
  Hyperparams hp;
  hp.m = 0.5;
  SUBCASE("huge lambda gives one cluster, converged on pass 2") {
    hp.lambda = 1e9;
    const auto r = craft_fit(data, hp);
    CHECK(r.clusters() == 1);
    CHECK(r.converged);
    CHECK(r.iterations == 2);
  }
  SUBCASE("lambda zero: every row opens a cluster on pass 1") {
    const auto nd = fx::numeric({{0.0}, {1.0}, {2.5}, {4.0}});
    hp.lambda = 0.0;
    hp.full_masks = true;
    CraftFitter f(nd, hp);
    f.initialize();
    const auto pass = f.assignment_pass();
    // the seed row itself costs zero against its own centre
    CHECK(pass.opened == 3);
  }
}

TEST_CASE("property: assignment optimality and state invariants") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const auto data = fx::random_mixed(rng, 10 + rng() % 20, 2 + rng() % 5);
    Hyperparams hp;
    hp.lambda = std::uniform_real_distribution<double>(0.5, 8.0)(rng);
    hp.m = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
    hp.mode = rng() % 2 ? BudgetMode::Fixed : BudgetMode::Approx;
    hp.seed = rng();
    CraftFitter f(data, hp);
    f.initialize();
    for (int pass = 0; pass < 6; ++pass) {
      const ClusterState before = f.state();
      const auto rec = f.assignment_pass();
      // replay each decision against the state it saw
      ClusterState replay = before;
      for (std::size_t n = 0; n < data.rows(); ++n) {
        const auto& dec = rec.decisions[n];
        double best = INFINITY;
        for (std::size_t k = 0; k < replay.size(); ++k) best = std::min(best, point_cost(data, n, replay, k, f.constants()));
        CHECK(dec.nearest_cost == best);
        if (dec.opened) {
          CHECK(best > f.threshold());
          replay.clusters.push_back(f.state().clusters[static_cast<std::size_t>(dec.cluster)]);
        } else {
          CHECK(best <= f.threshold());
          CHECK(point_cost(data, n, replay, static_cast<std::size_t>(dec.cluster), f.constants()) == best);
        }
      }
      f.refresh();
      const auto& st = f.state();
      for (auto z : st.z) CHECK((z >= 0 && static_cast<std::size_t>(z) < st.size()));
      std::vector<int> used(st.size(), 0);
      for (auto z : st.z) used[static_cast<std::size_t>(z)] = 1;
      for (int u : used) CHECK(u == 1);
      if (!rec.changed) break;
    }
  }
}

TEST_CASE("determinism and objective bookkeeping") {
  std::mt19937_64 rng(61);
  const auto data = fx::random_mixed(rng, 40, 6);
  Hyperparams hp;
  hp.lambda = 4.0;
  hp.m = 0.4;
  hp.seed = 99;
  const auto a = craft_fit(data, hp);
  const auto b = craft_fit(data, hp);
  CHECK(a.state.z == b.state.z);
  CHECK(a.state.masks() == b.state.masks());
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.objective == objective_value(data, a.state, hp.lambda, compute_f_constants(hp.m, resolve_rho(hp.m, hp.rho))));
  CHECK(static_cast<int>(a.objective_trace.size()) == a.iterations);
}

TEST_CASE("iteration cap reports non-convergence") {
  std::mt19937_64 rng(71);
  const auto data = fx::random_mixed(rng, 40, 6);
  Hyperparams hp;
  hp.lambda = 3.0;
  hp.max_iters = 1;
  const auto r = craft_fit(data, hp);
  CHECK(r.iterations == 1);
  CHECK_FALSE(r.converged);
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  hp.lambda = -1;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.m = 1.0;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.mode = BudgetMode::Approx;
  hp.eps_c = 1.0;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.rho = 0.3;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  CHECK_NOTHROW(hp.validate());
}
