#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "glmb/enumeration.hpp"
#include "glmb/rng.hpp"
#include "test_util.hpp"

using namespace glmb;

TEST_SUITE("enumeration") {

TEST_CASE("single coordinate, no measurements") {
  const auto maps = all_valid_maps(1, 0);
  REQUIRE(maps.size() == 2);
  CHECK(maps[0][0] == -1);
  CHECK(maps[1][0] == 0);
}

TEST_CASE("two coordinates, one measurement") {
  const auto maps = all_valid_maps(2, 1);
  REQUIRE(maps.size() == 8);
  const std::vector<std::vector<std::int32_t>> expected = {
      {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 0}, {0, 1}, {1, -1}, {1, 0}};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(maps[k] == AssociationMap(std::vector<std::int32_t>(expected[k])));
  }
}

TEST_CASE("counts, order, uniqueness, validity") {
  struct Case {
    int P, M;
    std::size_t count;
  };
  // counts follow sum_k C(P,k) * M!/(M-k)! * 2^(P-k)
  for (const auto& c : {Case{2, 2, 14}, Case{3, 2, 44}, Case{4, 3, 304}}) {
    const auto maps = all_valid_maps(c.P, c.M);
    CHECK(maps.size() == c.count);
    std::set<AssociationMap> seen;
    for (std::size_t k = 0; k < maps.size(); ++k) {
      CHECK(is_positive_one_to_one(maps[k], c.M));
      if (k > 0) CHECK(maps[k - 1] < maps[k]);  // strict lexicographic order
      seen.insert(maps[k]);
    }
    CHECK(seen.size() == maps.size());
  }
}

TEST_CASE("guard refuses oversized instances") {
  CHECK_THROWS_AS(enumerate_valid_maps(30, 10, [](const AssociationMap&) {}), std::length_error);
  CHECK_THROWS_AS(enumerate_valid_maps(0, 1, [](const AssociationMap&) {}), std::invalid_argument);
}

TEST_CASE("brute force probabilities") {
  SUBCASE("one object, no measurements") {
    const CostMatrix eta(1, 0, {3.0, 1.0});
    const auto dist = brute_force_distribution(eta);
    REQUIRE(dist.size() == 2);
    CHECK(dist[0].probability == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(dist[1].probability == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("all-ones matrix is uniform") {
    const CostMatrix eta(2, 1, std::vector<double>(6, 1.0));
    for (const auto& mp : brute_force_distribution(eta)) {
      CHECK(mp.probability == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    }
  }
  SUBCASE("small example map (0,1) has mass 3/14") {
    const CostMatrix eta(2, 1, {1, 1, 2, 1, 1, 3});
    const auto dist = brute_force_distribution(eta);
    bool found = false;
    double total = 0.0;
    for (const auto& mp : dist) {
      total += mp.probability;
      if (mp.map == AssociationMap(std::vector<std::int32_t>{0, 1})) {
        found = true;
        CHECK(mp.probability == doctest::Approx(3.0 / 14.0).epsilon(1e-12));
      }
    }
    CHECK(found);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

}  // TEST_SUITE
