#include "glmb/conditional_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace glmb {

ConditionalState::ConditionalState(const AssociationMap& gamma0, const CostMatrix& eta,
                                   double alpha, double beta)
    : eta_(&eta), alpha_(alpha), beta_(beta), tempered_(true) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");

  const int P = eta.num_objects();
  const int M = eta.num_measurements();
  etab_.resize(static_cast<std::size_t>(P) * cols());
  if (beta_ == 1.0) {
    // pow(x, 1.0) is not guaranteed to return x bit-for-bit; copy instead
    for (int i = 0; i < P; ++i) {
      for (std::int32_t j = -1; j <= M; ++j) etab_[flat(i, j)] = eta(i, j);
    }
  } else {
    for (int i = 0; i < P; ++i) {
      for (std::int32_t j = -1; j <= M; ++j) etab_[flat(i, j)] = std::pow(eta(i, j), beta_);
    }
  }
  init_rows(gamma0);
  rho_.resize(static_cast<std::size_t>(P));
  rebuild_rho();
}

ConditionalState::ConditionalState(const AssociationMap& gamma0, const CostMatrix& eta)
    : eta_(&eta), tempered_(false) {
  init_rows(gamma0);
}

void ConditionalState::init_rows(const AssociationMap& gamma0) {
  const int P = eta_->num_objects();
  const int M = eta_->num_measurements();
  if (gamma0.size() != P) {
    throw std::invalid_argument("start map length does not match cost matrix rows");
  }

  owner_.assign(static_cast<std::size_t>(M), -1);
  for (int i = 0; i < P; ++i) {
    const std::int32_t j = gamma0[i];
    if (j < kNonExistent || j > M) throw std::domain_error("start map entry outside [-1, M]");
    if (j >= 1) {
      auto& o = owner_[static_cast<std::size_t>(j - 1)];
      if (o >= 0) throw std::invalid_argument("start map violates the positive 1-1 constraint");
      o = i;
    }
  }
  gamma_ = gamma0;

  pi_.resize(static_cast<std::size_t>(P) * cols());
  nu1_.assign(static_cast<std::size_t>(P), 0.0);
  if (tempered_) nub_.assign(static_cast<std::size_t>(P), 0.0);
  for (int i = 0; i < P; ++i) {
    double s1 = 0.0, sb = 0.0;
    for (std::int32_t j = kNonExistent; j <= M; ++j) {
      const bool masked = j >= 1 && owner_[static_cast<std::size_t>(j - 1)] >= 0 &&
                          owner_[static_cast<std::size_t>(j - 1)] != i;
      const double v = masked ? 0.0 : (*eta_)(i, j);
      pi_[flat(i, j)] = v;
      if (v > 0.0) {
        s1 += v;
        if (tempered_) sb += etab_[flat(i, j)];
      }
    }
    nu1_[static_cast<std::size_t>(i)] = s1;
    if (tempered_) nub_[static_cast<std::size_t>(i)] = sb;
  }
}

void ConditionalState::apply_move(int n, std::int32_t new_j) {
  const int P = eta_->num_objects();
  const int M = eta_->num_measurements();
  if (n < 0 || n >= P) throw std::invalid_argument("coordinate index out of range");
  if (new_j < kNonExistent || new_j > M) throw std::domain_error("move target outside [-1, M]");

  const std::int32_t old_j = gamma_[n];
  if (new_j == old_j) return;  // selection weights stay valid, reuse them
  if (new_j >= 1) {
    const std::int32_t o = owner_[static_cast<std::size_t>(new_j - 1)];
    if (o >= 0 && o != n) {
      throw std::domain_error("move target measurement " + std::to_string(new_j) +
                              " is already claimed");
    }
  }

  gamma_[n] = new_j;
  if (old_j >= 1) owner_[static_cast<std::size_t>(old_j - 1)] = -1;
  if (new_j >= 1) owner_[static_cast<std::size_t>(new_j - 1)] = n;

  // Only two columns can change for the other rows: old_j is released
  // (restore eta) and new_j is claimed (mask to zero). Row n itself masks on
  // the *other* coordinates' values, none of which moved.
  const bool release = old_j >= 1;
  const bool claim = new_j >= 1;
  if (release || claim) {
    for (int i = 0; i < P; ++i) {
      if (i == n) continue;
      if (release) {
        const double v = (*eta_)(i, old_j);
        pi_[flat(i, old_j)] = v;
        nu1_[static_cast<std::size_t>(i)] += v;
        if (tempered_) nub_[static_cast<std::size_t>(i)] += etab_[flat(i, old_j)];
      }
      if (claim) {
        pi_[flat(i, new_j)] = 0.0;
        nu1_[static_cast<std::size_t>(i)] -= (*eta_)(i, new_j);
        if (tempered_) nub_[static_cast<std::size_t>(i)] -= etab_[flat(i, new_j)];
      }
    }
  }
  if (tempered_) rebuild_rho();
}

void ConditionalState::rebuild_rho() {
  // rho_tilde(i) = phi_i(cur) / pi_i(cur)
  //             = alpha + (1 - alpha) * (eta_i(cur)^beta / nu_beta) * (nu1 / eta_i(cur));
  // the current value of a valid map is never masked in its own row.
  const int P = eta_->num_objects();
  double sum = 0.0;
  if (alpha_ == 1.0) {
    for (int i = 0; i < P; ++i) rho_[static_cast<std::size_t>(i)] = 1.0;
    sum = static_cast<double>(P);
  } else {
    for (int i = 0; i < P; ++i) {
      const std::int32_t cur = gamma_[i];
      const double r = alpha_ + (1.0 - alpha_) * (etab_[flat(i, cur)] / nub_[static_cast<std::size_t>(i)]) *
                                    (nu1_[static_cast<std::size_t>(i)] / (*eta_)(i, cur));
      rho_[static_cast<std::size_t>(i)] = r;
      sum += r;
    }
  }
  rho_sum_ = sum;
}

}  // namespace glmb
