#include "glmb/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glmb {

void check_enumeration_guard(int P, int M) {
  if (P < 1) throw std::invalid_argument("enumeration needs at least one coordinate");
  if (M < 0) throw std::invalid_argument("negative measurement count");
  const double raw = std::pow(static_cast<double>(M) + 2.0, static_cast<double>(P));
  if (!(raw <= 1e7)) {
    throw std::length_error("entry space (M+2)^P exceeds 1e7; instance too large to enumerate");
  }
}

namespace {

void enumerate_rec(int depth, int P, int M, AssociationMap& buf, std::vector<char>& used,
                   const std::function<void(const AssociationMap&)>& visit) {
  for (std::int32_t j = kNonExistent; j <= M; ++j) {
    if (j >= 1 && used[static_cast<std::size_t>(j - 1)]) continue;
    buf[depth] = j;
    if (depth + 1 == P) {
      visit(buf);
    } else {
      if (j >= 1) used[static_cast<std::size_t>(j - 1)] = 1;
      enumerate_rec(depth + 1, P, M, buf, used, visit);
      if (j >= 1) used[static_cast<std::size_t>(j - 1)] = 0;
    }
  }
}

}  // namespace

void enumerate_valid_maps(int P, int M, const std::function<void(const AssociationMap&)>& visit) {
  check_enumeration_guard(P, M);
  AssociationMap buf = AssociationMap::all_undetected(P);
  std::vector<char> used(static_cast<std::size_t>(M), 0);
  enumerate_rec(0, P, M, buf, used, visit);
}

std::vector<AssociationMap> all_valid_maps(int P, int M) {
  std::vector<AssociationMap> out;
  enumerate_valid_maps(P, M, [&](const AssociationMap& g) { out.push_back(g); });
  return out;
}

std::vector<MapProbability> brute_force_distribution(const CostMatrix& eta) {
  std::vector<MapProbability> out;
  enumerate_valid_maps(eta.num_objects(), eta.num_measurements(),
                       [&](const AssociationMap& g) {
                         out.push_back({g, joint_log_weight(g, eta)});
                       });
  // normalise through log-sum-exp; products of many entries can leave double range
  double max_lw = -std::numeric_limits<double>::infinity();
  for (const auto& mp : out) max_lw = std::max(max_lw, mp.probability);
  double z = 0.0;
  for (const auto& mp : out) z += std::exp(mp.probability - max_lw);
  const double log_z = max_lw + std::log(z);
  for (auto& mp : out) mp.probability = std::exp(mp.probability - log_z);
  return out;
}

}  // namespace glmb
