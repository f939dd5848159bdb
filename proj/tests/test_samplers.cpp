#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "glmb/association.hpp"
#include "glmb/enumeration.hpp"
#include "glmb/rng.hpp"
#include "glmb/samplers.hpp"
#include "test_util.hpp"

using namespace glmb;

namespace {

bool same_iterates(const SampleBatch& a, const SampleBatch& b) {
  if (a.size() != b.size() || a.num_objects() != b.num_objects()) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (!std::ranges::equal(a.map_at(t), b.map_at(t))) return false;
  }
  return true;
}

test::MapCounts tally_batch(const SampleBatch& batch, bool weighted = false) {
  test::MapCounts counts;
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const double mass = weighted ? std::exp(batch.importance_log_weights()[t]) : 1.0;
    test::tally(counts, batch.map_at(t), mass);
  }
  return counts;
}

// Exact distribution of the map after one full sequential sweep from gamma0,
// found by walking every path of per-coordinate draws.
void sweep_paths(const CostMatrix& eta, AssociationMap gamma, int n, double prob,
                 test::MapCounts& out) {
  if (n == eta.num_objects()) {
    test::tally(out, gamma.entries(), prob);
    return;
  }
  const auto probs = conditional_direct(n, gamma, eta);
  for (std::int32_t j = -1; j <= eta.num_measurements(); ++j) {
    const double p = probs[static_cast<std::size_t>(j + 1)];
    if (p == 0.0) continue;
    AssociationMap next = gamma;
    next[n] = j;
    sweep_paths(eta, next, n + 1, prob * p, out);
  }
}

}  // namespace

TEST_SUITE("samplers") {

TEST_CASE("every variant emits only valid maps") {
  StreamRng rng(41);
  const CostMatrix eta = test::random_matrix(5, 4, rng);
  for (const SamplerVariant v : all_variants()) {
    SamplerConfig cfg;
    cfg.variant = v;
    cfg.iterations = 1500;
    cfg.alpha = 0.5;
    cfg.beta = 0.5;
    cfg.seed = 99;
    const SampleBatch batch = run_sampler(eta, cfg);
    REQUIRE(batch.size() == 1500);
    CHECK(batch.has_importance_weights() == (v == SamplerVariant::TgsPlus));
    for (std::size_t t = 0; t < batch.size(); ++t) {
      const auto g = batch.map_at(t);
      AssociationMap m(std::vector<std::int32_t>(g.begin(), g.end()));
      CHECK(is_positive_one_to_one(m, eta.num_measurements()));
    }
  }
}

TEST_CASE("tempered sampler with alpha = 1 collapses onto the random-scan sampler") {
  StreamRng rng(43);
  const CostMatrix eta = test::random_matrix(4, 3, rng);
  const AssociationMap start = AssociationMap::all_undetected(4);

  SampleBatch tgs(4, true), rgs(4, false);
  tgs_plus_run(start, eta, 3000, 1.0, 0.7, 1234, tgs);
  rgs_plus_run(start, eta, 3000, 1234, rgs);

  CHECK(same_iterates(tgs, rgs));
  for (const double lw : tgs.importance_log_weights()) CHECK(lw == 0.0);  // log(P/P)
}

TEST_CASE("deterministic forward scan subsampled every P steps equals the sweep sampler") {
  StreamRng rng(47);
  for (int rep = 0; rep < 5; ++rep) {
    const int P = rng.uniform_int(1, 5);
    const int M = rng.uniform_int(0, 4);
    const CostMatrix eta = test::random_matrix(P, M, rng);
    const AssociationMap start = test::random_valid_map(P, M, rng);
    const std::int64_t sweeps = 400;

    SampleBatch dgs(P, false), sgs(P, false);
    dgs_plus_run(start, eta, sweeps * P, 1.0, 0.5, true, 777, dgs);
    sgs_plus_run(start, eta, sweeps, 777, sgs);

    REQUIRE(sgs.size() == static_cast<std::size_t>(sweeps));
    for (std::int64_t s = 0; s < sweeps; ++s) {
      const std::size_t end_of_sweep = static_cast<std::size_t>((s + 1) * P - 1);
      CHECK(std::ranges::equal(dgs.map_at(end_of_sweep), sgs.map_at(static_cast<std::size_t>(s))));
    }
  }
}

TEST_CASE("deterministic scan touches coordinates in cycle order") {
  StreamRng rng(53);
  const int P = 3, M = 2;
  const CostMatrix eta = test::random_matrix(P, M, rng);
  const AssociationMap start = AssociationMap::all_undetected(P);

  for (const bool forward : {true, false}) {
    SampleBatch batch(P, false);
    dgs_plus_run(start, eta, 600, 0.5, 0.5, forward, 31, batch);
    std::vector<bool> moved(P, false);
    for (std::size_t t = 0; t < batch.size(); ++t) {
      const int expected = forward ? static_cast<int>(t % P) : P - 1 - static_cast<int>(t % P);
      const auto prev = t == 0 ? start.entries() : batch.map_at(t - 1);
      const auto curr = batch.map_at(t);
      for (int i = 0; i < P; ++i) {
        if (prev[static_cast<std::size_t>(i)] != curr[static_cast<std::size_t>(i)]) {
          CHECK(i == expected);
          moved[static_cast<std::size_t>(i)] = true;
        }
      }
    }
    for (int i = 0; i < P; ++i) CHECK(moved[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("one sweep reproduces the exact path distribution") {
  StreamRng rng(59);
  const CostMatrix eta = test::random_matrix(3, 2, rng);
  const AssociationMap start = test::random_valid_map(3, 2, rng);

  test::MapCounts exact_counts;
  sweep_paths(eta, start, 0, 1.0, exact_counts);
  std::vector<MapProbability> exact;
  for (const auto& [k, p] : exact_counts) {
    exact.push_back({AssociationMap(std::vector<std::int32_t>(k)), p});
  }

  test::MapCounts emp;
  for (std::uint64_t s = 0; s < 40000; ++s) {
    SampleBatch one(3, false);
    sgs_plus_run(start, eta, 1, s, one);
    test::tally(emp, one.map_at(0), 1.0);
  }
  CHECK(test::total_variation(emp, exact) < 0.02);
}

TEST_CASE("stationary distributions match the brute force oracle") {
  StreamRng rng(61);
  const CostMatrix eta = test::random_matrix(3, 2, rng);
  const auto exact = brute_force_distribution(eta);
  const AssociationMap start = AssociationMap::all_undetected(3);
  const std::int64_t moves = 200000;

  SUBCASE("tempered, importance weighted") {
    SampleBatch b(3, true);
    tgs_plus_run(start, eta, moves, 0.5, 0.5, 7, b);
    CHECK(test::total_variation(tally_batch(b, true), exact) < 0.02);
  }
  SUBCASE("random scan, incremental") {
    SampleBatch b(3, false);
    rgs_plus_run(start, eta, moves, 7, b);
    CHECK(test::total_variation(tally_batch(b), exact) < 0.02);
  }
  SUBCASE("deterministic scan, every P-th iterate, collapsed proposal") {
    for (const bool fwd : {true, false}) {
      SampleBatch b(3, false);
      dgs_plus_run(start, eta, moves, 1.0, 0.5, fwd, 7, b);
      test::MapCounts sub;
      for (std::size_t t = 2; t < b.size(); t += 3) test::tally(sub, b.map_at(t), 1.0);
      CHECK(test::total_variation(sub, exact) < 0.02);
    }
  }
  SUBCASE("deterministic scan, beta = 1 collapses the mixture too") {
    SampleBatch b(3, false);
    dgs_plus_run(start, eta, moves, 0.4, 1.0, true, 7, b);
    test::MapCounts sub;
    for (std::size_t t = 2; t < b.size(); t += 3) test::tally(sub, b.map_at(t), 1.0);
    CHECK(test::total_variation(sub, exact) < 0.02);
  }
  SUBCASE("sweep samplers and from-scratch baselines") {
    SampleBatch sp(3, false), sg(3, false), rg(3, false);
    sgs_plus_run(start, eta, 80000, 7, sp);
    sgs_run(start, eta, 80000, 7, sg);
    rgs_run(start, eta, moves, 7, rg);
    CHECK(test::total_variation(tally_batch(sp), exact) < 0.02);
    CHECK(test::total_variation(tally_batch(sg), exact) < 0.02);
    CHECK(test::total_variation(tally_batch(rg), exact) < 0.02);
  }
}

TEST_CASE("single coordinate sweep sampler draws from the bare row") {
  const CostMatrix eta(1, 2, {4.0, 2.0, 1.0, 1.0});
  std::vector<MapProbability> exact;
  for (std::int32_t j = -1; j <= 2; ++j) {
    exact.push_back({AssociationMap(std::vector<std::int32_t>{j}), eta(0, j) / 8.0});
  }
  SampleBatch b(1, false);
  sgs_plus_run(AssociationMap::all_undetected(1), eta, 100000, 3, b);
  CHECK(test::total_variation(tally_batch(b), exact) < 0.02);
}

TEST_CASE("importance weight spread respects the tempering bound") {
  StreamRng rng(67);
  const CostMatrix eta = test::random_matrix(3, 2, rng);
  const double alpha = 0.5, beta = 0.5;

  // exact bound: max over valid maps and coordinates of pi/phi - 1
  double bound = 0.0;
  for (const auto& g : all_valid_maps(3, 2)) {
    for (int i = 0; i < 3; ++i) {
      const auto probs = conditional_direct(i, g, eta);
      double nu1 = 0.0, nub = 0.0;
      for (std::int32_t j = -1; j <= 2; ++j) {
        if (probs[static_cast<std::size_t>(j + 1)] == 0.0) continue;
        nu1 += eta(i, j);
        nub += std::pow(eta(i, j), beta);
      }
      const std::int32_t cur = g[i];
      const double pi_cur = eta(i, cur) / nu1;
      const double phi_cur = alpha * pi_cur + (1.0 - alpha) * std::pow(eta(i, cur), beta) / nub;
      bound = std::max(bound, pi_cur / phi_cur - 1.0);
    }
  }

  SampleBatch b(3, true);
  tgs_plus_run(AssociationMap::all_undetected(3), eta, 200000, alpha, beta, 11, b);
  double mean = 0.0;
  for (const double lw : b.importance_log_weights()) mean += std::exp(lw);
  mean /= static_cast<double>(b.size());
  double var = 0.0;
  for (const double lw : b.importance_log_weights()) {
    const double w = std::exp(lw) / mean;
    var += (w - 1.0) * (w - 1.0);
  }
  var /= static_cast<double>(b.size());
  CHECK(var <= bound * 1.05);
}

TEST_CASE("deduplication") {
  const CostMatrix eta(2, 1, {1, 1, 2, 1, 1, 3});

  SUBCASE("repeats collapse, first-occurrence order is kept") {
    SampleBatch b(2, false);
    const std::vector<std::vector<std::int32_t>> seq = {
        {0, 1}, {1, 0}, {0, 1}, {-1, -1}, {1, 0}};
    for (const auto& g : seq) b.accept(std::span<const std::int32_t>(g), 0.0);
    const auto unique = dedup(b, eta);
    REQUIRE(unique.size() == 3);
    CHECK(unique[0].map == AssociationMap(std::vector<std::int32_t>{0, 1}));
    CHECK(unique[1].map == AssociationMap(std::vector<std::int32_t>{1, 0}));
    CHECK(unique[2].map == AssociationMap(std::vector<std::int32_t>{-1, -1}));
    CHECK(unique[0].log_weight == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(unique[1].log_weight == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(unique[2].log_weight == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("a long chain on a tiny instance recovers the full support") {
    SamplerConfig cfg;
    cfg.variant = SamplerVariant::TgsPlus;
    cfg.iterations = 10000;
    cfg.seed = 23;
    const auto unique = dedup(run_sampler(eta, cfg), eta);
    CHECK(unique.size() == 8);  // every valid map: all entries are positive
  }

  SUBCASE("empty batch") {
    const SampleBatch b(2, false);
    CHECK(dedup(b, eta).empty());
  }
}

TEST_CASE("seeding is reproducible and sensitive") {
  StreamRng rng(71);
  const CostMatrix eta = test::random_matrix(4, 3, rng);
  SamplerConfig cfg;
  cfg.variant = SamplerVariant::TgsPlus;
  cfg.iterations = 500;
  cfg.seed = 5;
  const SampleBatch a = run_sampler(eta, cfg);
  const SampleBatch b = run_sampler(eta, cfg);
  cfg.seed = 6;
  const SampleBatch c = run_sampler(eta, cfg);
  CHECK(same_iterates(a, b));
  CHECK(!same_iterates(a, c));
}

TEST_CASE("config validation") {
  const CostMatrix eta(1, 0, {1.0, 1.0});
  SamplerConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(run_sampler(eta, cfg), std::invalid_argument);
  cfg.iterations = 10;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(run_sampler(eta, cfg), std::invalid_argument);
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  CHECK_THROWS_AS(run_sampler(eta, cfg), std::invalid_argument);
}

TEST_CASE("variant names round-trip") {
  for (const SamplerVariant v : all_variants()) {
    const auto parsed = parse_variant(variant_name(v));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == v);
  }
  CHECK(!parse_variant("bogus").has_value());
}

}  // TEST_SUITE
