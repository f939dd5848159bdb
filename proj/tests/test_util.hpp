#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "glmb/association.hpp"
#include "glmb/enumeration.hpp"
#include "glmb/rng.hpp"

namespace glmb::test {

inline CostMatrix random_matrix(int P, int M, StreamRng& rng, double lo = 0.01, double hi = 10.0) {
  std::vector<double> v(static_cast<std::size_t>(P) * static_cast<std::size_t>(M + 2));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return CostMatrix(P, M, std::move(v));
}

// Random valid map: greedy left-to-right draw from the running conditional support.
inline AssociationMap random_valid_map(int P, int M, StreamRng& rng) {
  std::vector<std::int32_t> entries(static_cast<std::size_t>(P));
  std::vector<char> used(static_cast<std::size_t>(M), 0);
  for (int i = 0; i < P; ++i) {
    std::vector<std::int32_t> options{kNonExistent, kUndetected};
    for (std::int32_t j = 1; j <= M; ++j) {
      if (!used[static_cast<std::size_t>(j - 1)]) options.push_back(j);
    }
    const std::int32_t j = options[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
    entries[static_cast<std::size_t>(i)] = j;
    if (j >= 1) used[static_cast<std::size_t>(j - 1)] = 1;
  }
  return AssociationMap(std::move(entries));
}

using MapCounts = std::map<std::vector<std::int32_t>, double>;

inline void tally(MapCounts& counts, std::span<const std::int32_t> gamma, double mass) {
  counts[std::vector<std::int32_t>(gamma.begin(), gamma.end())] += mass;
}

// Total variation between a weighted empirical tally and the exact distribution.
inline double total_variation(const MapCounts& counts, const std::vector<MapProbability>& exact) {
  double total = 0.0;
  for (const auto& [k, v] : counts) total += v;
  double tv = 0.0;
  MapCounts seen = counts;
  for (const auto& mp : exact) {
    std::vector<std::int32_t> key(mp.map.entries().begin(), mp.map.entries().end());
    double emp = 0.0;
    if (auto it = seen.find(key); it != seen.end()) {
      emp = it->second / total;
      seen.erase(it);
    }
    tv += std::abs(emp - mp.probability);
  }
  for (const auto& [k, v] : seen) tv += v / total;  // mass on maps the oracle lacks
  return 0.5 * tv;
}

}  // namespace glmb::test
