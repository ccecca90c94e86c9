#include "mafrfs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mafrfs/errors.hpp"
#include "mafrfs/parallel.hpp"

namespace mafrfs {

std::vector<int> knn_predict(const Matrix& train, std::span<const int> train_labels,
                             const Matrix& test, std::size_t k) {
  const std::size_t n = train.rows();
  if (n == 0) throw InvalidArgument("knn needs a non-empty training set");
  if (train_labels.size() != n) throw InvalidArgument("training label count mismatch");
  if (k < 1 || k > n)
    throw InvalidArgument("K must lie in [1, " + std::to_string(n) + "], got " +
                          std::to_string(k));
  if (test.cols() != train.cols()) throw InvalidArgument("train/test feature count mismatch");

  int max_label = 0;
  for (int l : train_labels) {
    if (l < 0) throw InvalidArgument("negative class index");
    max_label = std::max(max_label, l);
  }

  std::vector<int> predictions(test.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  std::vector<std::size_t> votes(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t t = 0; t < test.rows(); ++t) {
    const auto x = test.row(t);
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = train.row(i);
      double sq = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double d = x[c] - y[c];
        sq += d * d;
      }
      dist[i] = {sq, i};
    }
    // Lexicographic (distance, row) ordering gives the lower-row tie-break.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t r = 0; r < k; ++r) ++votes[static_cast<std::size_t>(train_labels[dist[r].second])];
    // max_element returns the first maximum, i.e. the smallest class index.
    predictions[t] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return predictions;
}

std::string_view to_string(CutRounding rounding) {
  switch (rounding) {
    case CutRounding::Round: return "round";
    case CutRounding::Ceil: return "ceil";
    case CutRounding::Floor: return "floor";
  }
  return "?";
}

CutRounding parse_cut_rounding(std::string_view name) {
  if (name == "round") return CutRounding::Round;
  if (name == "ceil") return CutRounding::Ceil;
  if (name == "floor") return CutRounding::Floor;
  throw InvalidArgument("unknown cut rounding '" + std::string(name) + "' (round|ceil|floor)");
}

std::size_t cut_size(double percent, std::size_t num_features, CutRounding rounding) {
  if (!(percent > 0.0 && percent <= 100.0))
    throw InvalidArgument("cut percentage must lie in (0, 100]");
  const double exact = percent * static_cast<double>(num_features) / 100.0;
  double rounded = 0.0;
  switch (rounding) {
    case CutRounding::Round: rounded = std::floor(exact + 0.5); break;
    case CutRounding::Ceil: rounded = std::ceil(exact); break;
    case CutRounding::Floor: rounded = std::floor(exact); break;
  }
  const auto size = static_cast<std::size_t>(rounded);
  return std::clamp<std::size_t>(size, 1, std::max<std::size_t>(num_features, 1));
}

CvReport evaluate_ranking(const DataTable& table, const FoldPlan& plan,
                          std::span<const RankingResult> rankings, const EvalOptions& options,
                          const Classifier& classifier) {
  if (plan.assignments.size() != table.num_samples())
    throw InvalidArgument("fold plan does not match the dataset size");
  if (rankings.size() != plan.k)
    throw InvalidArgument("expected " + std::to_string(plan.k) + " rankings, got " +
                          std::to_string(rankings.size()));
  for (std::size_t f = 0; f < rankings.size(); ++f)
    if (rankings[f].fold_id != f)
      throw InvalidArgument("misaligned fold ids: ranking " + std::to_string(f) +
                            " is not tagged with fold " + std::to_string(f));
  if (options.cuts.empty()) throw InvalidArgument("at least one cut is required");

  const std::size_t m = table.num_features();
  CvReport report;
  report.cuts = options.cuts;
  for (double c : options.cuts) report.cut_sizes.push_back(cut_size(c, m, options.rounding));

  struct FoldView {
    Matrix train;
    Matrix test;
    std::vector<int> train_labels;
    std::vector<int> test_labels;
  };
  std::vector<FoldView> views(plan.k);
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto train_rows = plan.train_indices(f);
    const auto test_rows = plan.test_indices(f);
    const Matrix train_raw = gather_rows(table.values(), train_rows);
    const MinMaxScaler scaler = MinMaxScaler::fit(train_raw);
    views[f].train = scaler.transform(train_raw);
    views[f].test = scaler.transform(gather_rows(table.values(), test_rows));
    for (std::size_t r : train_rows) views[f].train_labels.push_back(table.labels()[r]);
    for (std::size_t r : test_rows) views[f].test_labels.push_back(table.labels()[r]);
  }

  const std::size_t num_cuts = options.cuts.size();
  report.per_fold_accuracy.assign(plan.k, std::vector<double>(num_cuts, 0.0));
  parallel_for(plan.k * num_cuts, options.threads, [&](std::size_t cell) {
    const std::size_t f = cell / num_cuts;
    const std::size_t c = cell % num_cuts;
    const auto& order = rankings[f].order;
    const std::size_t keep = std::min(report.cut_sizes[c], order.size());
    if (keep == 0) throw InvalidArgument("ranking for fold " + std::to_string(f) + " is empty");
    const std::span<const std::size_t> top(order.data(), keep);
    const FoldView& v = views[f];
    const auto predicted =
        classifier.fit_predict(project(v.train, top), v.train_labels, project(v.test, top));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == v.test_labels[i];
    report.per_fold_accuracy[f][c] =
        static_cast<double>(correct) / static_cast<double>(v.test_labels.size());
  });

  report.mean_per_cut.assign(num_cuts, 0.0);
  for (std::size_t c = 0; c < num_cuts; ++c) {
    double sum = 0.0;
    for (std::size_t f = 0; f < plan.k; ++f) sum += report.per_fold_accuracy[f][c];
    report.mean_per_cut[c] = sum / static_cast<double>(plan.k);
  }
  report.grand_mean = std::accumulate(report.mean_per_cut.begin(), report.mean_per_cut.end(), 0.0) /
                      static_cast<double>(num_cuts);
  return report;
}

CvReport evaluate_ranking(const DataTable& table, const FoldPlan& plan,
                          std::span<const RankingResult> rankings, const EvalOptions& options) {
  return evaluate_ranking(table, plan, rankings, options, KnnClassifier(options.neighbors));
}

}  // namespace mafrfs
