#pragma once

#include <functional>
#include <vector>

#include "glmb/association.hpp"

namespace glmb {

struct MapProbability {
  AssociationMap map;
  double probability = 0.0;
};

// Refuses instances whose raw entry space (M+2)^P exceeds 1e7.
// Throws std::length_error; callers wanting exact answers must stay desk-scale.
void check_enumeration_guard(int P, int M);

// Visits every positive 1-1 map exactly once, in lexicographic entry order with
// -1 < 0 < 1 < ... < M. The reference the samplers are measured against.
void enumerate_valid_maps(int P, int M, const std::function<void(const AssociationMap&)>& visit);

std::vector<AssociationMap> all_valid_maps(int P, int M);

// Exact normalised probability of every valid map under the cost matrix,
// in enumeration order.
std::vector<MapProbability> brute_force_distribution(const CostMatrix& eta);

}  // namespace glmb
