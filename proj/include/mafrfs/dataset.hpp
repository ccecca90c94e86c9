#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mafrfs/matrix.hpp"

namespace mafrfs {

// Samples x features matrix with categorical labels.
//
// Invariants (checked on construction): n >= 2, m >= 1, p >= 2, all values
// finite, every label in [0, p) and every class present at least once.
class DataTable {
public:
  DataTable(Matrix values, std::vector<int> labels, std::vector<std::string> feature_names,
            std::vector<std::string> class_names);

  std::size_t num_samples() const { return values_.rows(); }
  std::size_t num_features() const { return values_.cols(); }
  std::size_t num_classes() const { return class_names_.size(); }

  const Matrix& values() const { return values_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  std::vector<double> feature(std::size_t f) const { return values_.column(f); }

  // Rows in the given order; throws DataError if a class would go missing.
  DataTable select_rows(std::span<const std::size_t> rows) const;

private:
  Matrix values_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
};

// Ordered, duplicate-free list of feature indices; order is selection order.
class FeatureSubset {
public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t f) const;

  // Throws InvalidArgument if f is already present.
  void push_back(std::size_t f);
  FeatureSubset with(std::size_t f) const;

  bool operator==(const FeatureSubset&) const = default;

private:
  std::vector<std::size_t> indices_;
};

struct LabelColumn {
  // Empty name with last == true selects the final column.
  std::string name;
  bool last = false;

  static LabelColumn by_name(std::string n) { return {std::move(n), false}; }
  static LabelColumn last_column() { return {{}, true}; }
  // "last" maps to last_column(), anything else is a column name.
  static LabelColumn parse(const std::string& selector);
};

// Non-blank records of a comma-delimited text, fields unquoted and trimmed.
std::vector<std::vector<std::string>> read_csv_records(const std::string& text);
// Strict finite-number parse of a whole cell.
bool parse_finite(const std::string& cell, double& out);

// Comma-delimited, header mandatory, '.' decimal point. Non-label columns must
// be numeric. Labels are encoded by first appearance; row order is preserved.
DataTable load_csv(const std::filesystem::path& path, const LabelColumn& label_column);
DataTable parse_csv(const std::string& text, const LabelColumn& label_column);

// Per-feature min/max learned on one table and applied to others.
class MinMaxScaler {
public:
  static MinMaxScaler fit(const Matrix& values);

  // Affine map to [0,1]; constant columns map to 0. Values outside the fitted
  // range are clipped.
  Matrix transform(const Matrix& values) const;

  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }

private:
  std::vector<double> mins_;
  std::vector<double> maxs_;
};

// Min-max rescales every feature column of `table` to [0,1].
DataTable normalize(const DataTable& table);

// n x |subset| matrix of the selected columns in subset order.
Matrix project(const DataTable& table, const FeatureSubset& subset);
Matrix project(const Matrix& values, std::span<const std::size_t> columns);

Matrix gather_rows(const Matrix& values, std::span<const std::size_t> rows);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;

  bool operator==(const FoldPlan&) const = default;
};

// Stratified assignment: each class is shuffled with the seeded generator and
// dealt round-robin, continuing the deal across classes so fold sizes and
// per-class counts each differ by at most one.
FoldPlan stratified_kfold(const DataTable& table, std::size_t k, std::uint64_t seed);

}  // namespace mafrfs
