#include "mafrfs/select.hpp"

#include <algorithm>
#include <limits>

#include "mafrfs/errors.hpp"
#include "mafrfs/parallel.hpp"

namespace mafrfs {

std::string_view to_string(Framework framework) {
  return framework == Framework::FRFS ? "frfs" : "mafrfs";
}

Framework parse_framework(std::string_view name) {
  if (name == "frfs") return Framework::FRFS;
  if (name == "mafrfs") return Framework::MAFRFS;
  throw InvalidArgument("unknown framework '" + std::string(name) + "' (frfs|mafrfs)");
}

std::string_view to_string(PoolContext context) {
  return context == PoolContext::WithPool ? "with-pool" : "without-pool";
}

PoolContext parse_pool_context(std::string_view name) {
  if (name == "with-pool") return PoolContext::WithPool;
  if (name == "without-pool") return PoolContext::WithoutPool;
  throw InvalidArgument("unknown pool context '" + std::string(name) +
                        "' (with-pool|without-pool)");
}

void SelectorConfig::validate(std::size_t num_features) const {
  if (sop < 1) throw InvalidArgument("sop must be at least 1");
  if (k && (*k < 1 || *k > num_features))
    throw InvalidArgument("k must lie in [1, " + std::to_string(num_features) + "], got " +
                          std::to_string(*k));
  if (stop_at_constraint) {
    if (measure != MeasureKind::FD)
      throw InvalidArgument("stop-at-constraint is defined for the fd measure only");
    if (!(*stop_at_constraint > 0.0 && *stop_at_constraint <= 1.0))
      throw InvalidArgument("stop-at-constraint threshold must lie in (0, 1]");
  }
  if (!(measure_settings.log_base > 0.0) || measure_settings.log_base == 1.0)
    throw InvalidArgument("log base must be positive and not 1");
}

namespace {

std::vector<std::size_t> unselected(const FeatureSubset& selected, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < m; ++f)
    if (!selected.contains(f)) out.push_back(f);
  return out;
}

// psi for every candidate against ctx, in candidate order.
std::vector<std::pair<std::size_t, double>> scan(const FitnessContext& ctx,
                                                 const std::vector<std::size_t>& candidates,
                                                 std::size_t threads) {
  std::vector<std::pair<std::size_t, double>> deltas(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    deltas[i] = {candidates[i], ctx.value_with(candidates[i]) - ctx.current_value()};
  });
  return deltas;
}

struct StopRule {
  std::optional<double> target;

  static StopRule make(const SelectorConfig& cfg, const FitnessContext& ctx) {
    if (!cfg.stop_at_constraint) return {};
    return {*cfg.stop_at_constraint * fd(ctx.full_relation(), ctx.fuzzy_labels())};
  }
  bool reached(const FitnessContext& ctx) const {
    return target && !ctx.selected().empty() && ctx.current_value() >= *target;
  }
};

void commit(RankingResult& out, FitnessContext& ctx, std::size_t feature) {
  const double before = ctx.current_value();
  ctx.add(feature);
  out.order.push_back(feature);
  out.fitness_trace.push_back(ctx.current_value() - before);
  out.value_trace.push_back(ctx.current_value());
}

}  // namespace

RankingResult frfs_rank(const DataTable& table, const SelectorConfig& cfg, std::size_t threads) {
  const std::size_t m = table.num_features();
  cfg.validate(m);
  const DataTable norm = normalize(table);
  FitnessContext ctx(norm, cfg.measure, cfg.measure_settings);
  const StopRule stop = StopRule::make(cfg, ctx);

  RankingResult out;
  out.config = cfg;
  const std::size_t target = cfg.target(m);
  while (out.order.size() < target && !stop.reached(ctx)) {
    const auto candidates = unselected(ctx.selected(), m);
    const auto deltas = scan(ctx, candidates, threads);
    out.fitness_evaluations += deltas.size();
    commit(out, ctx, select_best(deltas, cfg.measure));
  }
  return out;
}

RankingResult mafrfs_rank(const DataTable& table, const SelectorConfig& cfg, std::size_t threads) {
  const std::size_t m = table.num_features();
  cfg.validate(m);
  const DataTable norm = normalize(table);
  FitnessContext ctx(norm, cfg.measure, cfg.measure_settings);
  MarginState margins(norm.labels(), norm.num_classes());
  const StopRule stop = StopRule::make(cfg, ctx);
  constexpr double kDegenerate = std::numeric_limits<double>::max();

  RankingResult out;
  out.config = cfg;
  const std::size_t target = cfg.target(m);
  while (out.order.size() < target && !stop.reached(ctx)) {
    const auto remaining = unselected(ctx.selected(), m);
    const std::size_t pool_size = std::min(cfg.sop, remaining.size());

    // Stage 1: fill the pool by repeated fitness extremization.
    std::vector<std::size_t> pool;
    if (cfg.pool_context == PoolContext::WithPool) {
      FitnessContext pool_ctx = ctx;
      while (pool.size() < pool_size) {
        const auto candidates = unselected(pool_ctx.selected(), m);
        const auto deltas = scan(pool_ctx, candidates, threads);
        out.fitness_evaluations += deltas.size();
        pool.push_back(select_best(deltas, cfg.measure));
        if (pool.size() < pool_size) pool_ctx.add(pool.back());
      }
    } else {
      auto deltas = scan(ctx, remaining, threads);
      out.fitness_evaluations += deltas.size();
      while (pool.size() < pool_size) {
        const std::size_t best = select_best(deltas, cfg.measure);
        pool.push_back(best);
        std::erase_if(deltas, [best](const auto& d) { return d.first == best; });
      }
    }

    // Stage 2: smallest margin delta within the pool.
    MarginStep step;
    const MarginReport current = margins.current();
    double baseline = 0.0;
    if (margins.num_features() > 0 && current.wbmr(cfg.strategy) != kDegenerate)
      baseline = current.wbmr(cfg.strategy);
    for (std::size_t f : pool) {
      const MarginReport rep = margins.evaluate_with(ctx.column(f));
      const double value = rep.wbmr(cfg.strategy);
      step.reports.push_back(rep);
      step.deltas.push_back(value == kDegenerate ? kDegenerate : value - baseline);
    }
    out.margin_evaluations += pool.size();

    std::size_t chosen = pool.front();
    const bool skip_margins =
        cfg.empty_wbmr == EmptyWbmrPolicy::SkipFirst && ctx.selected().empty();
    if (!skip_margins) {
      double best = step.deltas.front();
      for (std::size_t i = 1; i < pool.size(); ++i) {
        const double d = step.deltas[i];
        if (scores_tie(d, best) ? pool[i] < chosen : d < best) {
          best = d;
          chosen = pool[i];
        }
      }
    }

    out.pool_trace.push_back(pool);
    out.margin_trace.push_back(std::move(step));
    margins.add(ctx.column(chosen));
    commit(out, ctx, chosen);
  }
  return out;
}

RankingResult rank_features(const DataTable& table, const SelectorConfig& cfg,
                            std::size_t threads) {
  return cfg.framework == Framework::FRFS ? frfs_rank(table, cfg, threads)
                                          : mafrfs_rank(table, cfg, threads);
}

std::vector<RankingResult> rank_all_folds(const DataTable& table, const FoldPlan& plan,
                                          const SelectorConfig& cfg, std::size_t threads) {
  if (plan.assignments.size() != table.num_samples())
    throw InvalidArgument("fold plan does not match the dataset size");
  cfg.validate(table.num_features());

  std::vector<DataTable> training;
  training.reserve(plan.k);
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const auto rows = plan.train_indices(fold);
    std::vector<bool> seen(table.num_classes(), false);
    for (std::size_t r : rows) seen[static_cast<std::size_t>(table.labels()[r])] = true;
    for (std::size_t q = 0; q < seen.size(); ++q)
      if (!seen[q]) throw EmptyClassInFold(fold, q);
    training.push_back(table.select_rows(rows));
  }

  std::vector<std::optional<RankingResult>> results(plan.k);
  parallel_for(plan.k, threads, [&](std::size_t fold) {
    results[fold] = rank_features(training[fold], cfg, 1);
    results[fold]->fold_id = fold;
  });

  std::vector<RankingResult> out;
  out.reserve(plan.k);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace mafrfs
