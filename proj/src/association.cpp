#include "glmb/association.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace glmb {

AssociationMap::AssociationMap(std::vector<std::int32_t> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("association map needs at least one entry");
}

AssociationMap AssociationMap::all_undetected(int size) {
  if (size < 1) throw std::invalid_argument("association map needs at least one entry");
  return AssociationMap(std::vector<std::int32_t>(static_cast<std::size_t>(size), kUndetected));
}

CostMatrix::CostMatrix(int num_objects, int num_measurements, std::vector<double> row_major)
    : P_(num_objects), M_(num_measurements), v_(std::move(row_major)) {
  if (P_ < 1) throw std::invalid_argument("cost matrix needs at least one object row");
  if (M_ < 0) throw std::invalid_argument("cost matrix needs a non-negative measurement count");
  const std::size_t expected =
      static_cast<std::size_t>(P_) * static_cast<std::size_t>(M_ + 2);
  if (v_.size() != expected) {
    throw std::invalid_argument("cost matrix storage holds " + std::to_string(v_.size()) +
                                " values, expected " + std::to_string(expected));
  }
  for (double v : v_) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("cost matrix entries must be strictly positive and finite");
    }
  }
}

bool is_positive_one_to_one(const AssociationMap& map, int num_measurements) {
  if (num_measurements < 0) throw std::invalid_argument("negative measurement count");
  std::vector<char> used(static_cast<std::size_t>(num_measurements), 0);
  for (int i = 0; i < map.size(); ++i) {
    const std::int32_t j = map[i];
    if (j < kNonExistent || j > num_measurements) {
      throw std::domain_error("association entry " + std::to_string(j) + " at coordinate " +
                              std::to_string(i + 1) + " is outside [-1, " +
                              std::to_string(num_measurements) + "]");
    }
    if (j >= 1) {
      if (used[static_cast<std::size_t>(j - 1)]) return false;
      used[static_cast<std::size_t>(j - 1)] = 1;
    }
  }
  return true;
}

double joint_log_weight(const AssociationMap& map, const CostMatrix& eta) {
  if (map.size() != eta.num_objects()) {
    throw std::invalid_argument("association map length " + std::to_string(map.size()) +
                                " does not match cost matrix rows " +
                                std::to_string(eta.num_objects()));
  }
  if (!is_positive_one_to_one(map, eta.num_measurements())) {
    return -std::numeric_limits<double>::infinity();
  }
  double lw = 0.0;
  for (int i = 0; i < map.size(); ++i) lw += std::log(eta(i, map[i]));
  return lw;
}

std::vector<double> conditional_direct(int i, const AssociationMap& map, const CostMatrix& eta) {
  const int P = eta.num_objects();
  const int M = eta.num_measurements();
  if (map.size() != P) throw std::invalid_argument("association map length does not match cost matrix");
  if (i < 0 || i >= P) throw std::invalid_argument("coordinate index out of range");

  for (int k = 0; k < P; ++k) {
    if (map[k] < kNonExistent || map[k] > M) {
      throw std::domain_error("association entry outside [-1, M]");
    }
  }

  // Deliberately from-scratch: every positive candidate rescans the other
  // coordinates for a conflict, so one call costs O(PM). This is the naive
  // baseline the incremental kernels are measured against; keep it naive.
  std::vector<double> probs(static_cast<std::size_t>(M + 2), 0.0);
  double total = 0.0;
  for (std::int32_t j = kNonExistent; j <= M; ++j) {
    bool taken = false;
    if (j >= 1) {
      for (int k = 0; k < P; ++k) {
        if (k != i && map[k] == j) {
          taken = true;
          break;
        }
      }
    }
    const double w = taken ? 0.0 : eta(i, j);
    probs[static_cast<std::size_t>(j + 1)] = w;
    total += w;
  }
  for (double& w : probs) w /= total;  // total >= eta(i,-1) > 0
  return probs;
}

}  // namespace glmb
