#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace glmb {

// Entry conventions for one coordinate of an association map:
//   -1        object does not exist
//    0        object exists but is undetected
//    j >= 1   object exists and generates measurement j
inline constexpr std::int32_t kNonExistent = -1;
inline constexpr std::int32_t kUndetected = 0;

// Association map gamma over P hypothesised objects; entries live in {-1, 0, 1, ..., M}.
// Coordinates are 0-based here; external formats print them 1-based.
class AssociationMap {
 public:
  AssociationMap() = default;
  explicit AssociationMap(std::vector<std::int32_t> entries);
  static AssociationMap all_undetected(int size);

  int size() const { return static_cast<int>(entries_.size()); }
  std::int32_t operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
  std::span<const std::int32_t> entries() const { return entries_; }

  friend bool operator==(const AssociationMap&, const AssociationMap&) = default;
  friend auto operator<=>(const AssociationMap&, const AssociationMap&) = default;

 private:
  std::vector<std::int32_t> entries_;
};

// Association costs eta_i(j) for P objects against M measurements, stored row-major
// with the M+2 columns ordered j = -1, 0, 1, ..., M. Entries must be strictly
// positive and finite; that keeps every valid map reachable and lets zero act as
// an unambiguous "masked" marker inside the samplers.
class CostMatrix {
 public:
  CostMatrix(int num_objects, int num_measurements, std::vector<double> row_major);

  int num_objects() const { return P_; }
  int num_measurements() const { return M_; }
  int num_columns() const { return M_ + 2; }

  double operator()(int i, std::int32_t j) const { return v_[index(i, j)]; }
  std::span<const double> row(int i) const {
    return {v_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(M_ + 2),
            static_cast<std::size_t>(M_ + 2)};
  }

 private:
  std::size_t index(int i, std::int32_t j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(M_ + 2) +
           static_cast<std::size_t>(j + 1);
  }
  int P_ = 0;
  int M_ = 0;
  std::vector<double> v_;
};

struct WeightedAssignment {
  AssociationMap map;
  double log_weight = 0.0;
};

// True iff no two coordinates claim the same positive measurement index.
// Throws std::domain_error when an entry falls outside [-1, M].
bool is_positive_one_to_one(const AssociationMap& map, int num_measurements);

// log prod_i eta_i(gamma_i); -inf for maps violating the positive 1-1 constraint.
double joint_log_weight(const AssociationMap& map, const CostMatrix& eta);

// Full conditional of coordinate i given the rest of the map, recomputed from
// scratch in O(PM). Returns normalised probabilities over j = -1..M (index j+1).
// Reference implementation: the incremental samplers are checked against it.
std::vector<double> conditional_direct(int i, const AssociationMap& map, const CostMatrix& eta);

}  // namespace glmb
