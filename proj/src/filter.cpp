#include "glmb/filter.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "glmb/enumeration.hpp"
#include "glmb/rng.hpp"

namespace glmb {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (const double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_budget(const TruncationBudget& budget) {
  if (budget.max_hypotheses < 1) throw std::invalid_argument("need at least one hypothesis");
  if (budget.min_weight_ratio < 0.0 || budget.min_weight_ratio > 1.0)
    throw std::invalid_argument("weight threshold ratio must lie in [0, 1]");
  if (budget.num_threads < 1) throw std::invalid_argument("need at least one worker");
}

}  // namespace

GlmbDensity empty_prior() {
  GlmbDensity g;
  g.scan_index = 0;
  g.hypotheses.push_back(GlmbHypothesis{});
  return g;
}

CostMatrixRows build_cost_matrix(const GlmbHypothesis& parent, const MeasurementFrame& frame,
                                 const FilterModels& models) {
  const int M = static_cast<int>(frame.points.size());
  const double ps = models.motion.survival_prob;
  const double pd = models.sensor.detection_prob;
  constexpr double kFloor = std::numeric_limits<double>::min();

  std::vector<Label> row_labels;
  std::vector<GaussianDensity> row_densities;
  std::vector<double> row_prior;  // survival or birth probability per row
  row_labels.reserve(parent.labels.size() + models.births.components.size());
  for (std::size_t i = 0; i < parent.labels.size(); ++i) {
    row_labels.push_back(parent.labels[i]);
    row_densities.push_back(kalman_predict(parent.densities[i], models.motion));
    row_prior.push_back(ps);
  }
  const std::size_t num_survivors = row_labels.size();
  for (std::size_t i = 0; i < models.births.components.size(); ++i) {
    const auto& comp = models.births.components[i];
    if (comp.birth_prob <= 0.0) continue;  // the label can never exist: no row
    row_labels.push_back(Label{frame.scan, static_cast<std::int32_t>(i)});
    row_densities.push_back(comp.density);
    row_prior.push_back(comp.birth_prob);
  }

  const int P = static_cast<int>(row_labels.size());
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(P) * static_cast<std::size_t>(M + 2));
  for (int i = 0; i < P; ++i) {
    const double prior = row_prior[static_cast<std::size_t>(i)];
    entries.push_back(std::max(kFloor, 1.0 - prior));
    entries.push_back(std::max(kFloor, prior * (1.0 - pd)));
    for (int j = 0; j < M; ++j) {
      const double psi = predictive_likelihood(row_densities[static_cast<std::size_t>(i)],
                                               frame.points[static_cast<std::size_t>(j)],
                                               models.sensor);
      entries.push_back(std::max(kFloor, prior * psi));
    }
  }
  return CostMatrixRows{CostMatrix(P, M, std::move(entries)), std::move(row_labels),
                        std::move(row_densities), num_survivors};
}

namespace {

struct ParentOutput {
  std::vector<GlmbHypothesis> children;
  double sampler_seconds = 0.0;
};

ParentOutput expand_parent(const GlmbHypothesis& parent, std::size_t parent_idx,
                           const MeasurementFrame& frame, const FilterModels& models,
                           const TruncationBudget& budget) {
  ParentOutput out;

  std::size_t birth_rows = 0;
  for (const auto& c : models.births.components) birth_rows += c.birth_prob > 0.0 ? 1 : 0;
  if (parent.labels.empty() && birth_rows == 0) {
    // nothing can exist: the only child is the empty hypothesis
    out.children.push_back(GlmbHypothesis{{}, {}, {}, parent.log_weight});
    return out;
  }

  const CostMatrixRows rows = build_cost_matrix(parent, frame, models);
  const int P = rows.eta.num_objects();
  const int M = rows.eta.num_measurements();

  std::vector<WeightedAssignment> uniques;
  if (budget.exhaustive) {
    check_enumeration_guard(P, M);
    for (auto& map : all_valid_maps(P, M)) {
      const double lw = joint_log_weight(map, rows.eta);
      uniques.push_back(WeightedAssignment{std::move(map), lw});
    }
  } else {
    SamplerConfig cfg = budget.sampler;
    cfg.seed = derive_seed(budget.sampler.seed, static_cast<std::uint64_t>(frame.scan),
                           static_cast<std::uint64_t>(parent_idx));
    if (budget.proportional_allocation) {
      const double share = std::exp(parent.log_weight);
      cfg.iterations = std::max<std::int64_t>(
          1, std::llround(static_cast<double>(budget.sampler.iterations) * share));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SampleBatch batch = run_sampler(rows.eta, cfg);
    out.sampler_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    uniques = dedup(batch, rows.eta);
  }

  // posterior per (row, measurement) is shared by many maps: fill lazily
  std::vector<std::map<std::int32_t, GaussianDensity>> updated(static_cast<std::size_t>(P));
  out.children.reserve(uniques.size());
  for (const auto& wa : uniques) {
    GlmbHypothesis child;
    child.log_weight = parent.log_weight + wa.log_weight;
    for (int i = 0; i < P; ++i) {
      const std::int32_t j = wa.map[i];
      if (j == kNonExistent) continue;
      const auto ui = static_cast<std::size_t>(i);
      child.labels.push_back(rows.row_labels[ui]);
      if (ui < rows.num_survivors) {
        auto hist = parent.histories[ui];
        hist.push_back(j);
        child.histories.push_back(std::move(hist));
      } else {
        child.histories.push_back({j});
      }
      if (j == kUndetected) {
        child.densities.push_back(rows.row_densities[ui]);
      } else {
        auto [it, fresh] = updated[ui].try_emplace(j);
        if (fresh) {
          it->second = kalman_update(rows.row_densities[ui],
                                     frame.points[static_cast<std::size_t>(j - 1)], models.sensor);
        }
        child.densities.push_back(it->second);
      }
    }
    assert(std::is_sorted(child.labels.begin(), child.labels.end()));
    out.children.push_back(std::move(child));
  }
  return out;
}

}  // namespace

GlmbDensity joint_predict_update(const GlmbDensity& prior, const MeasurementFrame& frame,
                                 const FilterModels& models, const TruncationBudget& budget,
                                 UpdateStats* stats) {
  if (prior.hypotheses.empty()) throw std::domain_error("prior density has no hypotheses");
  check_budget(budget);
  if (frame.scan <= prior.scan_index)
    throw std::invalid_argument("frames must arrive in increasing scan order");

  const std::size_t num_parents = prior.hypotheses.size();
  std::vector<ParentOutput> outputs(num_parents);
  const auto process = [&](std::size_t idx) {
    outputs[idx] = expand_parent(prior.hypotheses[idx], idx, frame, models, budget);
  };
  const int workers = std::min<int>(budget.num_threads, static_cast<int>(num_parents));
  if (workers <= 1) {
    for (std::size_t idx = 0; idx < num_parents; ++idx) process(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = next.fetch_add(1); idx < num_parents; idx = next.fetch_add(1))
          process(idx);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<GlmbHypothesis> children;
  for (auto& out : outputs) {
    if (stats) stats->sampler_seconds += out.sampler_seconds;
    std::move(out.children.begin(), out.children.end(), std::back_inserter(children));
  }

  // merge children sharing (labels, histories); their densities coincide
  const auto key_less = [&](std::size_t a, std::size_t b) {
    if (children[a].labels != children[b].labels) return children[a].labels < children[b].labels;
    return children[a].histories < children[b].histories;
  };
  std::vector<std::size_t> order(children.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), key_less);

  GlmbDensity out;
  out.scan_index = frame.scan;
  std::vector<double> acc;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k + 1;
    while (end < order.size() && !key_less(order[k], order[end])) ++end;
    acc.clear();
    for (std::size_t q = k; q < end; ++q) acc.push_back(children[order[q]].log_weight);
    GlmbHypothesis merged = std::move(children[order[k]]);
    merged.log_weight = log_sum_exp(acc);
    out.hypotheses.push_back(std::move(merged));
    k = end;
  }

  normalize(out);
  if (budget.min_weight_ratio > 0.0) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& h : out.hypotheses) best = std::max(best, h.log_weight);
    const double cut = best + std::log(budget.min_weight_ratio);
    std::erase_if(out.hypotheses, [&](const GlmbHypothesis& h) { return h.log_weight < cut; });
  }
  // diversity diagnostic: distinct significant solutions found this scan,
  // counted before the hard cap discards the overflow
  if (stats) stats->unique_samples = out.hypotheses.size();
  std::sort(out.hypotheses.begin(), out.hypotheses.end(),
            [](const GlmbHypothesis& a, const GlmbHypothesis& b) {
              if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
              if (a.labels != b.labels) return a.labels < b.labels;
              return a.histories < b.histories;
            });
  if (out.hypotheses.size() > static_cast<std::size_t>(budget.max_hypotheses))
    out.hypotheses.resize(static_cast<std::size_t>(budget.max_hypotheses));
  normalize(out);
  return out;
}

std::vector<double> cardinality_distribution(const GlmbDensity& g) {
  std::size_t top = 0;
  for (const auto& h : g.hypotheses) top = std::max(top, h.labels.size());
  std::vector<double> pr(top + 1, 0.0);
  for (const auto& h : g.hypotheses) pr[h.labels.size()] += std::exp(h.log_weight);
  return pr;
}

std::vector<StateEstimate> extract_estimate(const GlmbDensity& g) {
  if (g.hypotheses.empty()) throw std::domain_error("empty density has no estimate");
  const auto card = cardinality_distribution(g);
  std::size_t best_n = 0;
  for (std::size_t n = 1; n < card.size(); ++n)
    if (card[n] > card[best_n]) best_n = n;

  const GlmbHypothesis* best = nullptr;
  for (const auto& h : g.hypotheses) {
    if (h.labels.size() != best_n) continue;
    if (best == nullptr || h.log_weight > best->log_weight) best = &h;
  }
  assert(best != nullptr);

  std::vector<StateEstimate> est;
  est.reserve(best->labels.size());
  for (std::size_t i = 0; i < best->labels.size(); ++i)
    est.push_back(StateEstimate{best->labels[i], best->densities[i].mean});
  return est;
}

void normalize(GlmbDensity& g) {
  if (g.hypotheses.empty()) throw std::domain_error("cannot normalize an empty density");
  std::vector<double> lw;
  lw.reserve(g.hypotheses.size());
  for (const auto& h : g.hypotheses) lw.push_back(h.log_weight);
  const double lse = log_sum_exp(lw);
  if (!std::isfinite(lse)) throw std::domain_error("density has no finite-weight hypothesis");
  for (auto& h : g.hypotheses) h.log_weight -= lse;
}

FilterResult run_filter(const std::vector<MeasurementFrame>& frames, const FilterModels& models,
                        const TruncationBudget& budget) {
  FilterResult result;
  result.estimates.reserve(frames.size());
  result.diagnostics.reserve(frames.size());
  GlmbDensity density = empty_prior();
  for (const auto& frame : frames) {
    const auto t0 = std::chrono::steady_clock::now();
    UpdateStats stats;
    density = joint_predict_update(density, frame, models, budget, &stats);
    auto estimate = extract_estimate(density);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.diagnostics.push_back(ScanDiagnostics{frame.scan,
                                                 static_cast<int>(density.hypotheses.size()),
                                                 stats.unique_samples,
                                                 static_cast<int>(estimate.size()), secs,
                                                 stats.sampler_seconds});
    result.estimates.push_back(std::move(estimate));
  }
  return result;
}

}  // namespace glmb
