#include "mafrfs/margins.hpp"

#include <cmath>
#include <limits>

#include "mafrfs/errors.hpp"

namespace mafrfs {

std::string_view to_string(MarginStrategy strategy) {
  return strategy == MarginStrategy::Global ? "global" : "local";
}

MarginStrategy parse_strategy(std::string_view name) {
  if (name == "global") return MarginStrategy::Global;
  if (name == "local") return MarginStrategy::Local;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "' (global|local)");
}

std::string_view to_string(EmptyWbmrPolicy policy) {
  return policy == EmptyWbmrPolicy::Zero ? "zero" : "skip-first";
}

EmptyWbmrPolicy parse_empty_wbmr(std::string_view name) {
  if (name == "zero") return EmptyWbmrPolicy::Zero;
  if (name == "skip-first") return EmptyWbmrPolicy::SkipFirst;
  throw InvalidArgument("unknown empty-wbmr policy '" + std::string(name) + "' (zero|skip-first)");
}

namespace {

constexpr double kDegenerate = std::numeric_limits<double>::max();

double distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sq += d * d;
  }
  return std::sqrt(sq);
}

void finish_ratios(MarginReport& r) {
  r.wbmr_g = r.lambda_g > 0.0 ? r.theta / r.lambda_g : kDegenerate;
  r.wbmr_l = r.delta_l > 0.0 ? r.theta / r.delta_l : kDegenerate;
  r.degenerate = !(r.lambda_g > 0.0) || !(r.delta_l > 0.0);
}

std::vector<std::size_t> class_counts(std::span<const int> labels, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes)
      throw InvalidArgument("label index out of range");
    ++counts[static_cast<std::size_t>(l)];
  }
  for (std::size_t q = 0; q < num_classes; ++q)
    if (counts[q] == 0) throw DataError("class " + std::to_string(q) + " has no samples");
  return counts;
}

}  // namespace

ClassCenters class_centers(const Matrix& projected, std::span<const int> labels,
                           std::size_t num_classes) {
  if (labels.size() != projected.rows()) throw InvalidArgument("label count mismatch");
  const std::size_t d = projected.cols();
  ClassCenters c{Matrix(num_classes, d, 0.0), std::vector<double>(d, 0.0),
                 class_counts(labels, num_classes)};
  for (std::size_t i = 0; i < projected.rows(); ++i) {
    const auto q = static_cast<std::size_t>(labels[i]);
    for (std::size_t k = 0; k < d; ++k) {
      c.per_class(q, k) += projected(i, k);
      c.overall[k] += projected(i, k);
    }
  }
  for (std::size_t q = 0; q < num_classes; ++q)
    for (std::size_t k = 0; k < d; ++k) c.per_class(q, k) /= static_cast<double>(c.counts[q]);
  for (double& v : c.overall) v /= static_cast<double>(projected.rows());
  return c;
}

double within_margin(const Matrix& projected, std::span<const int> labels,
                     const ClassCenters& centers) {
  const std::size_t p = centers.counts.size();
  std::vector<double> scatter(p, 0.0);
  for (std::size_t i = 0; i < projected.rows(); ++i) {
    const auto q = static_cast<std::size_t>(labels[i]);
    scatter[q] += distance(projected.row(i), centers.per_class.row(q));
  }
  double theta = 0.0;
  for (std::size_t q = 0; q < p; ++q) theta += scatter[q] / static_cast<double>(centers.counts[q]);
  return theta;
}

double between_margin_global(const ClassCenters& centers) {
  double sum = 0.0;
  for (std::size_t q = 0; q < centers.per_class.rows(); ++q)
    sum += distance(centers.per_class.row(q), centers.overall);
  return sum;
}

double between_margin_local(const ClassCenters& centers) {
  double sum = 0.0;
  const std::size_t p = centers.per_class.rows();
  for (std::size_t q = 0; q < p; ++q)
    for (std::size_t r = q + 1; r < p; ++r)
      sum += distance(centers.per_class.row(q), centers.per_class.row(r));
  return sum;
}

MarginReport wbmr(const Matrix& projected, std::span<const int> labels, std::size_t num_classes) {
  if (num_classes < 2) throw InvalidArgument("margins need at least two classes");
  const ClassCenters centers = class_centers(projected, labels, num_classes);
  MarginReport r;
  r.theta = within_margin(projected, labels, centers);
  r.lambda_g = between_margin_global(centers);
  r.delta_l = between_margin_local(centers);
  finish_ratios(r);
  return r;
}

double margin_delta(const Matrix& values, std::span<const int> labels, std::size_t num_classes,
                    const FeatureSubset& subset, std::size_t candidate, MarginStrategy strategy) {
  if (subset.contains(candidate)) throw InvalidArgument("candidate already in subset");
  const FeatureSubset extended = subset.with(candidate);
  const MarginReport next = wbmr(project(values, extended.indices()), labels, num_classes);
  const double next_value = next.wbmr(strategy);
  if (next_value == kDegenerate) return kDegenerate;

  double baseline = 0.0;
  if (!subset.empty()) {
    const double prev = wbmr(project(values, subset.indices()), labels, num_classes).wbmr(strategy);
    if (prev != kDegenerate) baseline = prev;
  }
  return next_value - baseline;
}

MarginState::MarginState(std::span<const int> labels, std::size_t num_classes)
    : labels_(labels.begin(), labels.end()),
      p_(num_classes),
      counts_(class_counts(labels, num_classes)) {
  if (num_classes < 2) throw InvalidArgument("margins need at least two classes");
  acc_.sample_sq.assign(labels_.size(), 0.0);
  acc_.global_sq.assign(p_, 0.0);
  acc_.pair_sq.assign(p_ * (p_ - 1) / 2, 0.0);
}

MarginState::Terms MarginState::terms_for(std::span<const double> column) const {
  const std::size_t n = labels_.size();
  if (column.size() != n) throw InvalidArgument("column length mismatch");
  std::vector<double> center(p_, 0.0);
  double overall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    center[static_cast<std::size_t>(labels_[i])] += column[i];
    overall += column[i];
  }
  for (std::size_t q = 0; q < p_; ++q) center[q] /= static_cast<double>(counts_[q]);
  overall /= static_cast<double>(n);

  Terms t;
  t.sample_sq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = column[i] - center[static_cast<std::size_t>(labels_[i])];
    t.sample_sq[i] = d * d;
  }
  t.global_sq.resize(p_);
  for (std::size_t q = 0; q < p_; ++q) {
    const double d = center[q] - overall;
    t.global_sq[q] = d * d;
  }
  t.pair_sq.reserve(p_ * (p_ - 1) / 2);
  for (std::size_t q = 0; q < p_; ++q)
    for (std::size_t r = q + 1; r < p_; ++r) {
      const double d = center[q] - center[r];
      t.pair_sq.push_back(d * d);
    }
  return t;
}

MarginReport MarginState::report(const Terms& extra, bool with_extra) const {
  auto combined = [&](const std::vector<double>& acc, const std::vector<double>& add,
                      std::size_t k) { return with_extra ? acc[k] + add[k] : acc[k]; };

  MarginReport r;
  std::vector<double> scatter(p_, 0.0);
  for (std::size_t i = 0; i < labels_.size(); ++i)
    scatter[static_cast<std::size_t>(labels_[i])] +=
        std::sqrt(combined(acc_.sample_sq, extra.sample_sq, i));
  for (std::size_t q = 0; q < p_; ++q) r.theta += scatter[q] / static_cast<double>(counts_[q]);
  for (std::size_t q = 0; q < p_; ++q)
    r.lambda_g += std::sqrt(combined(acc_.global_sq, extra.global_sq, q));
  for (std::size_t k = 0; k < acc_.pair_sq.size(); ++k)
    r.delta_l += std::sqrt(combined(acc_.pair_sq, extra.pair_sq, k));
  finish_ratios(r);
  return r;
}

MarginReport MarginState::evaluate_with(std::span<const double> column) const {
  return report(terms_for(column), true);
}

MarginReport MarginState::current() const { return report(Terms{}, false); }

void MarginState::add(std::span<const double> column) {
  const Terms t = terms_for(column);
  for (std::size_t i = 0; i < t.sample_sq.size(); ++i) acc_.sample_sq[i] += t.sample_sq[i];
  for (std::size_t q = 0; q < p_; ++q) acc_.global_sq[q] += t.global_sq[q];
  for (std::size_t k = 0; k < t.pair_sq.size(); ++k) acc_.pair_sq[k] += t.pair_sq[k];
  ++features_;
}

}  // namespace mafrfs
