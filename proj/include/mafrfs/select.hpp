#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mafrfs/dataset.hpp"
#include "mafrfs/margins.hpp"
#include "mafrfs/measures.hpp"

namespace mafrfs {

enum class Framework { FRFS, MAFRFS };
std::string_view to_string(Framework framework);
Framework parse_framework(std::string_view name);

// Which running subset scores candidates while the MAFRFS pool is filled.
enum class PoolContext {
  WithPool,     // psi against F' ∪ POOL
  WithoutPool,  // psi against F' only; the pool is the top-sop candidates
};
std::string_view to_string(PoolContext context);
PoolContext parse_pool_context(std::string_view name);

struct SelectorConfig {
  Framework framework = Framework::MAFRFS;
  MeasureKind measure = MeasureKind::FD;
  std::size_t sop = 3;
  MarginStrategy strategy = MarginStrategy::Global;
  // Target feature count; unset ranks every feature.
  std::optional<std::size_t> k;
  PoolContext pool_context = PoolContext::WithPool;
  EmptyWbmrPolicy empty_wbmr = EmptyWbmrPolicy::Zero;
  MeasureSettings measure_settings;
  // FD only: stop once FD(F') >= threshold * FD(F).
  std::optional<double> stop_at_constraint;

  // Throws InvalidArgument when the config cannot run on m features.
  void validate(std::size_t num_features) const;
  std::size_t target(std::size_t num_features) const { return k.value_or(num_features); }
};

struct MarginStep {
  std::vector<double> deltas;          // margin delta per pool entry, pool order
  std::vector<MarginReport> reports;   // WBMR report of F' ∪ {entry}, pool order
};

struct RankingResult {
  SelectorConfig config;
  std::optional<std::size_t> fold_id;
  std::vector<std::size_t> order;
  // measure(F' ∪ {chosen}) - measure(F') at each step.
  std::vector<double> fitness_trace;
  // measure(F') after each step.
  std::vector<double> value_trace;
  std::vector<MarginStep> margin_trace;       // MAFRFS only
  std::vector<std::vector<std::size_t>> pool_trace;  // MAFRFS only

  // Instrumentation: candidate fitness evaluations and margin evaluations.
  std::size_t fitness_evaluations = 0;
  std::size_t margin_evaluations = 0;
};

// Both rankers min-max normalize `table` first (a no-op on normalized data).
RankingResult frfs_rank(const DataTable& table, const SelectorConfig& cfg,
                        std::size_t threads = 1);
RankingResult mafrfs_rank(const DataTable& table, const SelectorConfig& cfg,
                          std::size_t threads = 1);
// Dispatches on cfg.framework.
RankingResult rank_features(const DataTable& table, const SelectorConfig& cfg,
                            std::size_t threads = 1);

// One ranking per fold, each computed on that fold's training rows only.
std::vector<RankingResult> rank_all_folds(const DataTable& table, const FoldPlan& plan,
                                          const SelectorConfig& cfg, std::size_t threads = 1);

}  // namespace mafrfs
