#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mafrfs/dataset.hpp"
#include "mafrfs/matrix.hpp"
#include "mafrfs/select.hpp"

namespace mafrfs {

// ---- classification harness ----

// Euclidean K-nearest-neighbour majority vote. Equal distances favour the
// lower training row; tied votes favour the smaller class index.
std::vector<int> knn_predict(const Matrix& train, std::span<const int> train_labels,
                             const Matrix& test, std::size_t k);

// Anything that can fit on training rows and label test rows.
class Classifier {
public:
  virtual ~Classifier() = default;
  virtual std::vector<int> fit_predict(const Matrix& train, std::span<const int> train_labels,
                                       const Matrix& test) const = 0;
};

class KnnClassifier final : public Classifier {
public:
  explicit KnnClassifier(std::size_t k) : k_(k) {}
  std::vector<int> fit_predict(const Matrix& train, std::span<const int> train_labels,
                               const Matrix& test) const override {
    return knn_predict(train, train_labels, test, k_);
  }

private:
  std::size_t k_;
};

enum class CutRounding { Round, Ceil, Floor };
std::string_view to_string(CutRounding rounding);
CutRounding parse_cut_rounding(std::string_view name);

// Number of top-ranked features kept for a cut of `percent` of m features,
// never below 1 (round is half-up).
std::size_t cut_size(double percent, std::size_t num_features,
                     CutRounding rounding = CutRounding::Round);

struct CvReport {
  std::vector<double> cuts;
  std::vector<std::size_t> cut_sizes;
  std::vector<std::vector<double>> per_fold_accuracy;  // fold x cut
  std::vector<double> mean_per_cut;
  double grand_mean = 0.0;
};

struct EvalOptions {
  std::vector<double> cuts{30, 50, 70, 90};
  std::size_t neighbors = 5;
  CutRounding rounding = CutRounding::Round;
  std::size_t threads = 1;
};

// For each fold and cut: keep the top features of that fold's ranking, scale
// with the training split's min/max (test rows clipped to [0,1]), fit on the
// training rows and score plain accuracy on the test rows.
CvReport evaluate_ranking(const DataTable& table, const FoldPlan& plan,
                          std::span<const RankingResult> rankings, const EvalOptions& options,
                          const Classifier& classifier);
CvReport evaluate_ranking(const DataTable& table, const FoldPlan& plan,
                          std::span<const RankingResult> rankings, const EvalOptions& options);

// ---- statistical comparison ----

struct RankMatrix {
  std::vector<std::vector<double>> ranks;  // N datasets x s algorithms
  std::vector<std::string> names;
};

// Per-dataset ranks (1 = best) with ties averaged; absent scores take the
// worst rank s.
RankMatrix rank_algorithms(const std::vector<std::vector<std::optional<double>>>& scores,
                           bool higher_is_better, std::vector<std::string> names = {});

struct FriedmanResult {
  std::vector<double> avg_ranks;
  double chi_sq = 0.0;
  double f_stat = 0.0;
  std::size_t dof1 = 0;
  std::size_t dof2 = 0;
  std::optional<double> q_alpha;
  std::optional<double> cd;
};

// Throws PerfectConsistency when N(s-1) equals chi^2.
FriedmanResult friedman(const RankMatrix& ranks, std::optional<double> q_alpha = std::nullopt);

// CD = q_alpha * sqrt(s(s+1) / (6N)).
double nemenyi_cd(std::size_t s, std::size_t n, double q_alpha);

// Two-tailed Nemenyi critical values at alpha = 0.05 for s in [2, 10].
std::optional<double> nemenyi_q_alpha_05(std::size_t s);

// Algorithm pairs whose average ranks differ by more than `cd`.
std::vector<std::pair<std::size_t, std::size_t>> significant_pairs(
    std::span<const double> avg_ranks, double cd);

}  // namespace mafrfs
