#include "glmb/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "glmb/conditional_state.hpp"
#include "glmb/rng.hpp"

namespace glmb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear CDF scan over non-negative weights. Entries equal to zero can never
// be picked, even when round-off pushes the target past the accumulated total:
// the fallback is the last strictly positive index, so masked values stay
// unreachable and the positive 1-1 constraint cannot be broken by rounding.
int sample_index(std::span<const double> w, double total, double u) {
  const double target = u * total;
  double acc = 0.0;
  int last_pos = -1;
  const int n = static_cast<int>(w.size());
  for (int k = 0; k < n; ++k) {
    const double v = w[k];
    if (v > 0.0) {
      acc += v;
      last_pos = k;
      if (target < acc) return k;
    }
  }
  return last_pos;
}

// Draw from the mixture proposal alpha * row/nu1 + (1-alpha) * row^beta/nu_beta.
// The tempered component inherits the row's mask: a zero stays a zero.
std::int32_t sample_mixture(std::span<const double> row, std::span<const double> etab_row,
                            double nu1, double nub, double alpha, double u,
                            std::vector<double>& mix) {
  const double a = alpha / nu1;
  const double b = (1.0 - alpha) / nub;
  const int n = static_cast<int>(row.size());
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = row[k] > 0.0 ? a * row[k] + b * etab_row[k] : 0.0;
    mix[static_cast<std::size_t>(k)] = w;
    total += w;
  }
  return static_cast<std::int32_t>(
             sample_index({mix.data(), static_cast<std::size_t>(n)}, total, u)) -
         1;
}

int floor_index(double u, int P) {
  const int n = static_cast<int>(u * P);
  return n >= P ? P - 1 : n;
}

// Row storage for the deterministic-scan samplers. Unlike ConditionalState the
// rows here are not all kept valid: only the row rebuilt last is, and the
// previous one doubles as the occupancy mask after being zeroed at its own
// current value.
struct ScanRows {
  int P = 0;
  int M = 0;
  std::vector<double> pi;
  std::vector<double> etab;  // only filled when the mixture proposal is in play
  std::vector<std::int32_t> gamma;

  std::size_t cols() const { return static_cast<std::size_t>(M + 2); }
  std::span<const double> row(int i) const {
    return {pi.data() + static_cast<std::size_t>(i) * cols(), cols()};
  }
  std::span<const double> etab_row(int i) const {
    return {etab.data() + static_cast<std::size_t>(i) * cols(), cols()};
  }
  std::span<const std::int32_t> gamma_span() const { return gamma; }

  void init(const AssociationMap& gamma0, const CostMatrix& eta, double beta, bool tempered) {
    P = eta.num_objects();
    M = eta.num_measurements();
    if (gamma0.size() != P) {
      throw std::invalid_argument("start map length does not match cost matrix rows");
    }
    gamma.assign(gamma0.entries().begin(), gamma0.entries().end());

    std::vector<std::int32_t> owner(static_cast<std::size_t>(M), -1);
    for (int i = 0; i < P; ++i) {
      const std::int32_t j = gamma[static_cast<std::size_t>(i)];
      if (j < kNonExistent || j > M) throw std::domain_error("start map entry outside [-1, M]");
      if (j >= 1) {
        auto& o = owner[static_cast<std::size_t>(j - 1)];
        if (o >= 0) throw std::invalid_argument("start map violates the positive 1-1 constraint");
        o = i;
      }
    }

    pi.resize(static_cast<std::size_t>(P) * cols());
    for (int i = 0; i < P; ++i) {
      double* r = pi.data() + static_cast<std::size_t>(i) * cols();
      for (std::int32_t j = kNonExistent; j <= M; ++j) {
        const bool masked = j >= 1 && owner[static_cast<std::size_t>(j - 1)] >= 0 &&
                            owner[static_cast<std::size_t>(j - 1)] != i;
        r[j + 1] = masked ? 0.0 : eta(i, j);
      }
    }
    if (tempered) {
      etab.resize(pi.size());
      for (int i = 0; i < P; ++i) {
        double* r = etab.data() + static_cast<std::size_t>(i) * cols();
        for (std::int32_t j = kNonExistent; j <= M; ++j) {
          r[j + 1] = beta == 1.0 ? eta(i, j) : std::pow(eta(i, j), beta);
        }
      }
    }
  }

  // Zero the carrier row m at its own value -- its zeros then mark exactly the
  // measurements claimed by *anyone* -- and rebuild row n against that mask,
  // keeping n's own current value available. O(M), no other row is touched.
  std::pair<double, double> advance(const CostMatrix& eta, int m, int n) {
    double* rm = pi.data() + static_cast<std::size_t>(m) * cols();
    const std::int32_t gm = gamma[static_cast<std::size_t>(m)];
    if (gm >= 1) rm[gm + 1] = 0.0;

    const std::int32_t keep = gamma[static_cast<std::size_t>(n)];
    double* rn = pi.data() + static_cast<std::size_t>(n) * cols();
    const double* eb = etab.empty() ? nullptr : etab.data() + static_cast<std::size_t>(n) * cols();
    double s1 = 0.0, sb = 0.0;
    for (std::int32_t j = kNonExistent; j <= M; ++j) {
      const std::size_t k = static_cast<std::size_t>(j + 1);
      if (rm[k] == 0.0 && j != keep) {
        rn[k] = 0.0;
      } else {
        const double v = eta(n, j);
        rn[k] = v;
        s1 += v;
        if (eb) sb += eb[k];
      }
    }
    return {s1, sb};
  }
};

void check_iterations(std::int64_t iterations) {
  if (iterations < 1) throw std::invalid_argument("sampler needs at least one iteration");
}

void check_mixing(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
}

}  // namespace

void SampleBatch::accept(std::span<const std::int32_t> gamma, double importance_log_weight) {
  if (static_cast<int>(gamma.size()) != P_) {
    throw std::logic_error("iterate length does not match the batch");
  }
  flat_.insert(flat_.end(), gamma.begin(), gamma.end());
  if (with_importance_) iw_.push_back(importance_log_weight);
}

void tgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  double alpha, double beta, std::uint64_t seed, SampleSink& sink) {
  check_iterations(iterations);
  ConditionalState st(gamma0, eta, alpha, beta);
  StreamRng rng(seed);
  const int M = eta.num_measurements();
  const double log_p = std::log(static_cast<double>(eta.num_objects()));
  std::vector<double> mix(static_cast<std::size_t>(M + 2));

  for (std::int64_t t = 0; t < iterations; ++t) {
    // informed coordinate choice: rho_tilde(i) = phi_i/pi_i at the current map
    const int n = sample_index(st.rho_tilde(), st.rho_tilde_sum(), rng.uniform01());
    const double u = rng.uniform01();
    std::int32_t j;
    if (alpha == 1.0) {
      // the mixture collapses to the conditional itself
      j = static_cast<std::int32_t>(sample_index(st.row(n), st.nu1(n), u)) - 1;
    } else {
      j = sample_mixture(st.row(n), st.eta_beta_row(n), st.nu1(n), st.nu_beta(n), alpha, u, mix);
    }
    st.apply_move(n, j);
    // importance weight of the emitted iterate: log P - log <rho_tilde, 1>
    sink.accept(st.current().entries(), log_p - std::log(st.rho_tilde_sum()));
  }
}

void rgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  std::uint64_t seed, SampleSink& sink) {
  check_iterations(iterations);
  ConditionalState st(gamma0, eta);
  StreamRng rng(seed);
  const int P = eta.num_objects();

  for (std::int64_t t = 0; t < iterations; ++t) {
    const int n = floor_index(rng.uniform01(), P);
    const double u = rng.uniform01();
    const std::int32_t j = static_cast<std::int32_t>(sample_index(st.row(n), st.nu1(n), u)) - 1;
    st.apply_move(n, j);
    sink.accept(st.current().entries(), kNaN);
  }
}

void dgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  double alpha, double beta, bool forward, std::uint64_t seed, SampleSink& sink) {
  check_iterations(iterations);
  check_mixing(alpha, beta);
  const int P = eta.num_objects();
  const int M = eta.num_measurements();
  ScanRows rows;
  rows.init(gamma0, eta, beta, alpha < 1.0);
  StreamRng rng(seed);
  std::vector<double> mix(static_cast<std::size_t>(M + 2));

  // The coordinate before the first one wraps around the cycle, so iteration 1
  // rebuilds against the far-end row straight out of the initialisation.
  int m = forward ? P - 1 : 0;
  for (std::int64_t t = 1; t <= iterations; ++t) {
    const int phase = static_cast<int>((t - 1) % P);
    const int n = forward ? phase : P - 1 - phase;
    const auto [s1, sb] = rows.advance(eta, m, n);
    const double u = rng.uniform01();
    std::int32_t j;
    if (alpha == 1.0) {
      j = static_cast<std::int32_t>(sample_index(rows.row(n), s1, u)) - 1;
    } else {
      j = sample_mixture(rows.row(n), rows.etab_row(n), s1, sb, alpha, u, mix);
    }
    rows.gamma[static_cast<std::size_t>(n)] = j;
    sink.accept(rows.gamma_span(), kNaN);
    m = n;
  }
}

void sgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t sweeps,
                  std::uint64_t seed, SampleSink& sink) {
  check_iterations(sweeps);
  const int P = eta.num_objects();
  ScanRows rows;
  rows.init(gamma0, eta, 1.0, false);
  StreamRng rng(seed);

  for (std::int64_t t = 0; t < sweeps; ++t) {
    for (int n = 0; n < P; ++n) {
      const int m = n == 0 ? P - 1 : n - 1;
      const auto [s1, sb] = rows.advance(eta, m, n);
      (void)sb;
      const double u = rng.uniform01();
      rows.gamma[static_cast<std::size_t>(n)] =
          static_cast<std::int32_t>(sample_index(rows.row(n), s1, u)) - 1;
    }
    sink.accept(rows.gamma_span(), kNaN);  // one iterate per full sweep
  }
}

void rgs_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
             std::uint64_t seed, SampleSink& sink) {
  check_iterations(iterations);
  const int P = eta.num_objects();
  if (gamma0.size() != P) throw std::invalid_argument("start map length does not match cost matrix");
  AssociationMap gamma = gamma0;
  StreamRng rng(seed);

  for (std::int64_t t = 0; t < iterations; ++t) {
    const int n = floor_index(rng.uniform01(), P);
    const auto probs = conditional_direct(n, gamma, eta);  // full O(PM) rebuild
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    gamma[n] = static_cast<std::int32_t>(sample_index(probs, total, rng.uniform01())) - 1;
    sink.accept(gamma.entries(), kNaN);
  }
}

void sgs_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t sweeps,
             std::uint64_t seed, SampleSink& sink) {
  check_iterations(sweeps);
  const int P = eta.num_objects();
  if (gamma0.size() != P) throw std::invalid_argument("start map length does not match cost matrix");
  AssociationMap gamma = gamma0;
  StreamRng rng(seed);

  for (std::int64_t t = 0; t < sweeps; ++t) {
    for (int n = 0; n < P; ++n) {
      const auto probs = conditional_direct(n, gamma, eta);
      const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
      gamma[n] = static_cast<std::int32_t>(sample_index(probs, total, rng.uniform01())) - 1;
    }
    sink.accept(gamma.entries(), kNaN);
  }
}

void run_sampler(const AssociationMap& gamma0, const CostMatrix& eta, const SamplerConfig& cfg,
                 SampleSink& sink) {
  switch (cfg.variant) {
    case SamplerVariant::TgsPlus:
      tgs_plus_run(gamma0, eta, cfg.iterations, cfg.alpha, cfg.beta, cfg.seed, sink);
      return;
    case SamplerVariant::RgsPlus:
      rgs_plus_run(gamma0, eta, cfg.iterations, cfg.seed, sink);
      return;
    case SamplerVariant::DgsPlusForward:
      dgs_plus_run(gamma0, eta, cfg.iterations, cfg.alpha, cfg.beta, true, cfg.seed, sink);
      return;
    case SamplerVariant::DgsPlusBackward:
      dgs_plus_run(gamma0, eta, cfg.iterations, cfg.alpha, cfg.beta, false, cfg.seed, sink);
      return;
    case SamplerVariant::SgsPlus:
      sgs_plus_run(gamma0, eta, cfg.iterations, cfg.seed, sink);
      return;
    case SamplerVariant::RgsGeneric:
      rgs_run(gamma0, eta, cfg.iterations, cfg.seed, sink);
      return;
    case SamplerVariant::SgsGeneric:
      sgs_run(gamma0, eta, cfg.iterations, cfg.seed, sink);
      return;
  }
  throw std::invalid_argument("unknown sampler variant");
}

SampleBatch run_sampler(const AssociationMap& gamma0, const CostMatrix& eta,
                        const SamplerConfig& cfg) {
  SampleBatch batch(eta.num_objects(), cfg.variant == SamplerVariant::TgsPlus);
  run_sampler(gamma0, eta, cfg, batch);
  return batch;
}

SampleBatch run_sampler(const CostMatrix& eta, const SamplerConfig& cfg) {
  return run_sampler(AssociationMap::all_undetected(eta.num_objects()), eta, cfg);
}

std::vector<WeightedAssignment> dedup(const SampleBatch& batch, const CostMatrix& eta) {
  const std::size_t T = batch.size();
  std::vector<WeightedAssignment> out;
  if (T == 0) return out;
  if (batch.num_objects() != eta.num_objects()) {
    throw std::invalid_argument("batch and cost matrix disagree on the object count");
  }

  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ma = batch.map_at(a);
    const auto mb = batch.map_at(b);
    const auto c = std::lexicographical_compare_three_way(ma.begin(), ma.end(), mb.begin(), mb.end());
    if (c != 0) return c < 0;
    return a < b;
  });

  // first index of every run of equal maps, then back to emission order
  std::vector<std::size_t> firsts;
  for (std::size_t k = 0; k < T; ++k) {
    if (k == 0 || !std::ranges::equal(batch.map_at(order[k]), batch.map_at(order[k - 1]))) {
      firsts.push_back(order[k]);
    }
  }
  std::sort(firsts.begin(), firsts.end());

  out.reserve(firsts.size());
  for (const std::size_t t : firsts) {
    const auto g = batch.map_at(t);
    AssociationMap map(std::vector<std::int32_t>(g.begin(), g.end()));
    const double lw = joint_log_weight(map, eta);
    out.push_back({std::move(map), lw});
  }
  return out;
}

const char* variant_name(SamplerVariant v) {
  switch (v) {
    case SamplerVariant::TgsPlus: return "tgs+";
    case SamplerVariant::RgsPlus: return "rgs+";
    case SamplerVariant::DgsPlusForward: return "dgs+fwd";
    case SamplerVariant::DgsPlusBackward: return "dgs+bwd";
    case SamplerVariant::SgsPlus: return "sgs+";
    case SamplerVariant::RgsGeneric: return "rgs";
    case SamplerVariant::SgsGeneric: return "sgs";
  }
  return "?";
}

std::optional<SamplerVariant> parse_variant(const std::string& name) {
  for (const SamplerVariant v : all_variants()) {
    if (name == variant_name(v)) return v;
  }
  return std::nullopt;
}

std::vector<SamplerVariant> all_variants() {
  return {SamplerVariant::TgsPlus,        SamplerVariant::RgsPlus,
          SamplerVariant::DgsPlusForward, SamplerVariant::DgsPlusBackward,
          SamplerVariant::SgsPlus,        SamplerVariant::RgsGeneric,
          SamplerVariant::SgsGeneric};
}

}  // namespace glmb
