#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glmb/association.hpp"

namespace glmb {

// Per-chain working state for the single-move samplers: the unnormalised
// conditional rows pi_tilde_i(j), their sums nu1, the beta-tempered sums
// nu_beta, and the unnormalised coordinate-selection weights rho_tilde.
//
// A row entry is exactly eta_i(j) when index j is free for object i and exactly
// 0.0 when some other object currently claims j. Moving one coordinate only
// (un)masks one column for the other rows, so a move costs O(P) instead of the
// O(PM) full rebuild; every accessor is kept consistent after each move.
//
// The cost matrix is borrowed, not owned; it must outlive the state.
class ConditionalState {
 public:
  // Tempered state (maintains nu_beta and rho_tilde): alpha, beta in (0, 1].
  ConditionalState(const AssociationMap& gamma0, const CostMatrix& eta, double alpha, double beta);
  // Plain state: rows and nu1 only, for samplers that never temper.
  ConditionalState(const AssociationMap& gamma0, const CostMatrix& eta);

  // Set coordinate n (0-based) to new_j and restore all invariants.
  // new_j must be unclaimed by the other coordinates. A no-op move returns
  // immediately: nothing changes, including the selection weights.
  void apply_move(int n, std::int32_t new_j);

  const AssociationMap& current() const { return gamma_; }
  const CostMatrix& eta() const { return *eta_; }
  bool tempered() const { return tempered_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  std::span<const double> row(int i) const {
    return {pi_.data() + static_cast<std::size_t>(i) * cols(), cols()};
  }
  double pi_tilde(int i, std::int32_t j) const { return pi_[flat(i, j)]; }
  double nu1(int i) const { return nu1_[static_cast<std::size_t>(i)]; }
  double nu_beta(int i) const { return nub_[static_cast<std::size_t>(i)]; }
  double eta_beta(int i, std::int32_t j) const { return etab_[flat(i, j)]; }
  std::span<const double> eta_beta_row(int i) const {
    return {etab_.data() + static_cast<std::size_t>(i) * cols(), cols()};
  }

  // Unnormalised selection weights: rho_tilde(i) = phi_i / pi_i at the current
  // value of coordinate i. Their sum feeds the importance weights.
  std::span<const double> rho_tilde() const { return rho_; }
  double rho_tilde_sum() const { return rho_sum_; }
  double rho(int i) const { return rho_[static_cast<std::size_t>(i)] / rho_sum_; }

 private:
  void init_rows(const AssociationMap& gamma0);
  void rebuild_rho();
  std::size_t cols() const { return static_cast<std::size_t>(eta_->num_columns()); }
  std::size_t flat(int i, std::int32_t j) const {
    return static_cast<std::size_t>(i) * cols() + static_cast<std::size_t>(j + 1);
  }

  const CostMatrix* eta_ = nullptr;
  double alpha_ = 1.0;
  double beta_ = 1.0;
  bool tempered_ = false;
  AssociationMap gamma_;
  std::vector<std::int32_t> owner_;  // owner_[j-1]: coordinate holding measurement j, else -1
  std::vector<double> pi_;           // P x (M+2), masked copies of eta
  std::vector<double> etab_;         // eta^beta, precomputed once (tempered only)
  std::vector<double> nu1_;
  std::vector<double> nub_;
  std::vector<double> rho_;
  double rho_sum_ = 0.0;
};

// Spec-facing constructor name; alpha/beta ride along in the state so that a
// move needs no extra arguments.
inline ConditionalState init_state(const AssociationMap& gamma0, const CostMatrix& eta,
                                   double alpha, double beta) {
  return ConditionalState(gamma0, eta, alpha, beta);
}
inline void propagate_state(ConditionalState& state, int n, std::int32_t new_j) {
  state.apply_move(n, new_j);
}

}  // namespace glmb
