#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mafrfs/dataset.hpp"
#include "mafrfs/matrix.hpp"

namespace mafrfs {

// Symmetric, reflexive n x n similarity matrix with entries in [0,1].
// Row i is the fuzzy similarity class of sample i.
class FuzzyRelation {
public:
  FuzzyRelation() = default;
  // Validates reflexivity, symmetry and range.
  FuzzyRelation(Matrix matrix, FeatureSubset subset);

  static FuzzyRelation ones(std::size_t n);
  static FuzzyRelation identity(std::size_t n);

  std::size_t size() const { return matrix_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }
  std::span<const double> row(std::size_t i) const { return matrix_.row(i); }
  const Matrix& matrix() const { return matrix_; }
  const FeatureSubset& subset() const { return subset_; }

  // Entrywise min with the single-feature relation of `column` (values in
  // [0,1]) without materializing that relation.
  void conjoin_feature(std::span<const double> column, std::size_t feature);

  bool operator==(const FuzzyRelation& other) const { return matrix_ == other.matrix_; }

private:
  Matrix matrix_;
  FeatureSubset subset_;
};

// The fixed De Morgan triple: T = min, S = max, N(a) = 1 - a.
struct FuzzyOperators {
  static constexpr double t_norm(double a, double b) { return a < b ? a : b; }
  static constexpr double t_conorm(double a, double b) { return a < b ? b : a; }
  static constexpr double negation(double a) { return 1.0 - a; }
};

// n x p soft class memberships; rows sum to one.
class FuzzyLabelMatrix {
public:
  explicit FuzzyLabelMatrix(Matrix memberships);

  std::size_t num_samples() const { return memberships_.rows(); }
  std::size_t num_classes() const { return memberships_.cols(); }
  double operator()(std::size_t i, std::size_t q) const { return memberships_(i, q); }
  std::span<const double> row(std::size_t i) const { return memberships_.row(i); }
  const Matrix& memberships() const { return memberships_; }

private:
  Matrix memberships_;
};

struct ApproximationPair {
  Matrix lower;  // n x p
  Matrix upper;  // n x p
};

// R[i][j] = 1 - |v_i - v_j|; values must lie in [0,1].
FuzzyRelation single_feature_relation(std::span<const double> column, std::size_t feature = 0);

// Entrywise minimum of all relations.
FuzzyRelation conjoin(std::span<const FuzzyRelation> relations);

// Conjunction of the single-feature relations of every column of `values`.
FuzzyRelation relation_for(const Matrix& values, const FeatureSubset& subset);

// |[x_i]| = sum_j R(x_i, x_j).
double fuzzy_cardinality(const FuzzyRelation& relation, std::size_t i);

// L_q(x_i) = |[x_i] ∩ LC_q| / |[x_i]| over a relation built from all features.
FuzzyLabelMatrix fuzzy_label(const FuzzyRelation& full_relation, std::span<const int> labels,
                             std::size_t num_classes);

// Min-sum overlap of fuzzy label rows: R[i][j] = sum_q min(L_q(x_i), L_q(x_j)).
FuzzyRelation label_relation(const FuzzyLabelMatrix& fl);

// 1 iff the crisp labels agree.
FuzzyRelation crisp_label_relation(std::span<const int> labels);

ApproximationPair approximations(const FuzzyRelation& relation, const FuzzyLabelMatrix& fl,
                                 FuzzyOperators ops = {});

// Binary dump: "FRM1", n as u64 LE, then n*n f64 LE row-major.
void write_relation(std::ostream& out, const FuzzyRelation& relation);
FuzzyRelation read_relation(std::istream& in);

}  // namespace mafrfs
