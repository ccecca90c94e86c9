#include "mafrfs/measures.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "mafrfs/errors.hpp"

namespace mafrfs {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::FD: return "fd";
    case MeasureKind::FE: return "fe";
    case MeasureKind::FJE: return "fje";
    case MeasureKind::FCE: return "fce";
    case MeasureKind::FMI: return "fmi";
  }
  return "?";
}

MeasureKind parse_measure(std::string_view name) {
  for (MeasureKind k : kAllMeasures)
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown measure '" + std::string(name) + "' (fd|fe|fje|fce|fmi)");
}

std::string_view to_string(LabelRelationMode mode) {
  return mode == LabelRelationMode::Fuzzy ? "fuzzy" : "crisp";
}

LabelRelationMode parse_label_relation(std::string_view name) {
  if (name == "fuzzy") return LabelRelationMode::Fuzzy;
  if (name == "crisp") return LabelRelationMode::Crisp;
  throw InvalidArgument("unknown label relation '" + std::string(name) + "' (fuzzy|crisp)");
}

namespace {

double log_in_base(double x, double base) {
  return base == 2.0 ? std::log2(x) : std::log(x) / std::log(base);
}

void require_same_size(const FuzzyRelation& a, const FuzzyRelation& b) {
  if (a.size() != b.size()) throw InvalidArgument("relation size mismatch");
}

double intersection_cardinality(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += std::min(a[j], b[j]);
  return sum;
}

}  // namespace

double fd(const FuzzyRelation& relation, const FuzzyLabelMatrix& fl, FuzzyOperators ops) {
  const ApproximationPair approx = approximations(relation, fl, ops);
  const std::size_t n = relation.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto low = approx.lower.row(i);
    sum += *std::max_element(low.begin(), low.end());
  }
  return sum / static_cast<double>(n);
}

double fe(const FuzzyRelation& relation, double log_base) {
  const std::size_t n = relation.size();
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += log_in_base(fuzzy_cardinality(relation, i) / dn, log_base);
  return -sum / dn;
}

double fje(const FuzzyRelation& relation, const FuzzyRelation& fl_relation, double log_base) {
  require_same_size(relation, fl_relation);
  const std::size_t n = relation.size();
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double inter = intersection_cardinality(relation.row(i), fl_relation.row(i));
    sum += log_in_base(inter / dn, log_base);
  }
  return -sum / dn;
}

double fce(const FuzzyRelation& relation, const FuzzyRelation& fl_relation, double log_base) {
  require_same_size(relation, fl_relation);
  const std::size_t n = relation.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double inter = intersection_cardinality(relation.row(i), fl_relation.row(i));
    sum += log_in_base(inter / fuzzy_cardinality(relation, i), log_base);
  }
  return -sum / static_cast<double>(n);
}

double fmi(const FuzzyRelation& relation, const FuzzyRelation& fl_relation, double log_base) {
  require_same_size(relation, fl_relation);
  const std::size_t n = relation.size();
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double inter = intersection_cardinality(relation.row(i), fl_relation.row(i));
    const double num = fuzzy_cardinality(relation, i) * fuzzy_cardinality(fl_relation, i);
    sum += log_in_base(num / (dn * inter), log_base);
  }
  return -sum / dn;
}

struct FitnessContext::Shared {
  std::size_t n = 0;
  std::size_t p = 0;
  MeasureSettings settings;
  std::vector<std::vector<double>> columns;  // m columns of length n
  FuzzyRelation full;
  FuzzyLabelMatrix fl{Matrix()};
  FuzzyRelation fl_relation;
  std::vector<double> fl_transposed;  // p x n
  std::vector<double> fl_cardinality;
};

FitnessContext::FitnessContext(const DataTable& normalized, MeasureKind kind,
                               MeasureSettings settings)
    : kind_(kind) {
  if (!(settings.log_base > 0.0) || settings.log_base == 1.0)
    throw InvalidArgument("log base must be positive and not 1");
  auto shared = std::make_shared<Shared>();
  const std::size_t n = normalized.num_samples();
  const std::size_t m = normalized.num_features();
  const std::size_t p = normalized.num_classes();
  shared->n = n;
  shared->p = p;
  shared->settings = settings;
  shared->columns.reserve(m);
  for (std::size_t f = 0; f < m; ++f) shared->columns.push_back(normalized.feature(f));

  std::vector<std::size_t> all(m);
  for (std::size_t f = 0; f < m; ++f) all[f] = f;
  shared->full = relation_for(normalized.values(), FeatureSubset(all));
  shared->fl = fuzzy_label(shared->full, normalized.labels(), p);
  shared->fl_relation = settings.label_relation == LabelRelationMode::Fuzzy
                            ? mafrfs::label_relation(shared->fl)
                            : crisp_label_relation(normalized.labels());
  shared->fl_transposed.resize(p * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q < p; ++q) shared->fl_transposed[q * n + i] = shared->fl(i, q);
  shared->fl_cardinality.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    shared->fl_cardinality[i] = fuzzy_cardinality(shared->fl_relation, i);
  shared_ = std::move(shared);

  current_ = FuzzyRelation::ones(n);
  current_value_ = evaluate(nullptr);
}

std::size_t FitnessContext::num_samples() const { return shared_->n; }
std::size_t FitnessContext::num_features() const { return shared_->columns.size(); }
const FuzzyLabelMatrix& FitnessContext::fuzzy_labels() const { return shared_->fl; }
const FuzzyRelation& FitnessContext::label_relation() const { return shared_->fl_relation; }
const FuzzyRelation& FitnessContext::full_relation() const { return shared_->full; }

std::span<const double> FitnessContext::column(std::size_t feature) const {
  if (feature >= shared_->columns.size()) throw InvalidArgument("feature index out of range");
  return shared_->columns[feature];
}

// One pass over the rows of min(R_F', R_candidate); each row is formed in a
// scratch buffer and folded into the running sum straight away.
double FitnessContext::evaluate(const double* extra_column) const {
  const Shared& s = *shared_;
  const std::size_t n = s.n;
  const double dn = static_cast<double>(n);
  std::vector<double> row(n);
  double sum = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto base = current_.row(i);
    if (extra_column) {
      const double vi = extra_column[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double sim = 1.0 - std::abs(vi - extra_column[j]);
        row[j] = base[j] < sim ? base[j] : sim;
      }
    } else {
      std::copy(base.begin(), base.end(), row.begin());
    }

    switch (kind_) {
      case MeasureKind::FD: {
        // lower_q(x_i) = min_j max(1 - R_ij, L_q(x_j)); FD takes the best class.
        for (std::size_t j = 0; j < n; ++j) row[j] = 1.0 - row[j];
        double best = 0.0;
        for (std::size_t q = 0; q < s.p; ++q) {
          const double* lq = s.fl_transposed.data() + q * n;
          double low = 1.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double t = row[j] > lq[j] ? row[j] : lq[j];
            low = t < low ? t : low;
          }
          best = std::max(best, low);
        }
        sum += best;
        break;
      }
      case MeasureKind::FE: {
        double card = 0.0;
        for (std::size_t j = 0; j < n; ++j) card += row[j];
        assert(card >= 1.0);
        sum += log_in_base(card / dn, s.settings.log_base);
        break;
      }
      case MeasureKind::FJE:
      case MeasureKind::FCE:
      case MeasureKind::FMI: {
        const auto lrow = s.fl_relation.row(i);
        double card = 0.0;
        double inter = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          card += row[j];
          inter += row[j] < lrow[j] ? row[j] : lrow[j];
        }
        assert(inter >= 1.0);
        double ratio = 0.0;
        if (kind_ == MeasureKind::FJE) ratio = inter / dn;
        else if (kind_ == MeasureKind::FCE) ratio = inter / card;
        else ratio = card * s.fl_cardinality[i] / (dn * inter);
        sum += log_in_base(ratio, s.settings.log_base);
        break;
      }
    }
  }
  return kind_ == MeasureKind::FD ? sum / dn : -sum / dn;
}

double FitnessContext::value_with(std::size_t candidate) const {
  return evaluate(column(candidate).data());
}

double FitnessContext::fitness(std::size_t candidate) const {
  if (selected().contains(candidate))
    throw InvalidArgument("candidate " + std::to_string(candidate) + " is already selected");
  return value_with(candidate) - current_value_;
}

void FitnessContext::add(std::size_t feature) {
  if (selected().contains(feature))
    throw InvalidArgument("feature " + std::to_string(feature) + " is already selected");
  current_.conjoin_feature(column(feature), feature);
  current_value_ = evaluate(nullptr);
}

std::size_t select_best(std::span<const std::pair<std::size_t, double>> deltas,
                        MeasureKind kind) {
  if (deltas.empty()) throw InvalidArgument("select_best needs at least one candidate");
  const bool maximize = direction(kind) == Direction::Maximize;
  auto best = deltas.front();
  for (const auto& d : deltas.subspan(1)) {
    if (scores_tie(d.second, best.second)) {
      if (d.first < best.first) best = d;
    } else if (maximize ? d.second > best.second : d.second < best.second) {
      best = d;
    }
  }
  return best.first;
}

}  // namespace mafrfs
