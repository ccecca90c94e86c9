#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mafrfs/dataset.hpp"
#include "mafrfs/fuzzy.hpp"

namespace mafrfs {

enum class MeasureKind { FD, FE, FJE, FCE, FMI };
enum class Direction { Maximize, Minimize };

// FD and FMI grow as uncertainty falls; the entropies shrink.
constexpr Direction direction(MeasureKind kind) {
  return kind == MeasureKind::FD || kind == MeasureKind::FMI ? Direction::Maximize
                                                             : Direction::Minimize;
}

std::string_view to_string(MeasureKind kind);
MeasureKind parse_measure(std::string_view name);
inline constexpr MeasureKind kAllMeasures[] = {MeasureKind::FD, MeasureKind::FE, MeasureKind::FJE,
                                               MeasureKind::FCE, MeasureKind::FMI};

// How the similarity relation over fuzzy labels is built.
enum class LabelRelationMode { Fuzzy, Crisp };
std::string_view to_string(LabelRelationMode mode);
LabelRelationMode parse_label_relation(std::string_view name);

// Mean over samples of the best-class lower approximation.
double fd(const FuzzyRelation& relation, const FuzzyLabelMatrix& fl, FuzzyOperators ops = {});

// Entropies over fuzzy similarity classes; class intersection is the
// entrywise min of relation rows.
double fe(const FuzzyRelation& relation, double log_base = 2.0);
double fje(const FuzzyRelation& relation, const FuzzyRelation& fl_relation,
           double log_base = 2.0);
double fce(const FuzzyRelation& relation, const FuzzyRelation& fl_relation,
           double log_base = 2.0);
double fmi(const FuzzyRelation& relation, const FuzzyRelation& fl_relation,
           double log_base = 2.0);

struct MeasureSettings {
  LabelRelationMode label_relation = LabelRelationMode::Fuzzy;
  double log_base = 2.0;
};

// Everything one uncertainty measure needs to score candidate features
// against a running selection F'. The fuzzy labels (built once from all
// features) are shared between copies; copying clones only the running
// relation, so a copy can explore F' ∪ POOL without touching the original.
class FitnessContext {
public:
  // `normalized` must hold feature values in [0,1].
  FitnessContext(const DataTable& normalized, MeasureKind kind, MeasureSettings settings = {});

  MeasureKind kind() const { return kind_; }
  std::size_t num_samples() const;
  std::size_t num_features() const;
  const FuzzyLabelMatrix& fuzzy_labels() const;
  const FuzzyRelation& label_relation() const;
  const FuzzyRelation& full_relation() const;
  const FuzzyRelation& current_relation() const { return current_; }
  const FeatureSubset& selected() const { return current_.subset(); }
  double current_value() const { return current_value_; }
  std::span<const double> column(std::size_t feature) const;

  // Measure of F' ∪ {candidate}; the running relation is not modified.
  double value_with(std::size_t candidate) const;

  // psi(candidate) = measure(F' ∪ {candidate}) - measure(F').
  double fitness(std::size_t candidate) const;

  // Appends `feature` to F' and updates the running relation and value.
  void add(std::size_t feature);

private:
  struct Shared;
  double evaluate(const double* extra_column) const;

  std::shared_ptr<const Shared> shared_;
  MeasureKind kind_;
  FuzzyRelation current_;
  double current_value_ = 0.0;
};

// Two scores closer than this (relative to max(1, |a|, |b|)) are tied, so
// last-bit rounding differences never decide a selection.
inline constexpr double kTieTolerance = 1e-12;

inline bool scores_tie(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Extremal feature per the measure's direction; ties go to the lowest index.
std::size_t select_best(std::span<const std::pair<std::size_t, double>> deltas,
                        MeasureKind kind);

}  // namespace mafrfs
