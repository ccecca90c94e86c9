#include "mafrfs/fuzzy.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "mafrfs/errors.hpp"

namespace mafrfs {

FuzzyRelation::FuzzyRelation(Matrix matrix, FeatureSubset subset)
    : matrix_(std::move(matrix)), subset_(std::move(subset)) {
  const std::size_t n = matrix_.rows();
  if (matrix_.cols() != n) throw InvalidArgument("relation matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix_(i, i) != 1.0) throw InvalidArgument("relation is not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("relation entry outside [0,1]");
      if (v != matrix_(j, i)) throw InvalidArgument("relation is not symmetric");
    }
  }
}

FuzzyRelation FuzzyRelation::ones(std::size_t n) { return {Matrix(n, n, 1.0), {}}; }

FuzzyRelation FuzzyRelation::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return {std::move(m), {}};
}

void FuzzyRelation::conjoin_feature(std::span<const double> column, std::size_t feature) {
  const std::size_t n = size();
  if (column.size() != n) throw InvalidArgument("column length does not match relation size");
  for (double v : column)
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidArgument("feature value outside [0,1]; normalize first");
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = column[i];
    auto r = matrix_.row(i);
    for (std::size_t j = 0; j < n; ++j) r[j] = std::min(r[j], 1.0 - std::abs(vi - column[j]));
  }
  if (!subset_.contains(feature)) subset_.push_back(feature);
}

FuzzyLabelMatrix::FuzzyLabelMatrix(Matrix memberships) : memberships_(std::move(memberships)) {
  for (std::size_t i = 0; i < memberships_.rows(); ++i) {
    double sum = 0.0;
    for (double v : memberships_.row(i)) {
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("label membership outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("label memberships must sum to 1");
  }
}

FuzzyRelation single_feature_relation(std::span<const double> column, std::size_t feature) {
  FuzzyRelation rel = FuzzyRelation::ones(column.size());
  rel.conjoin_feature(column, feature);
  return rel;
}

FuzzyRelation conjoin(std::span<const FuzzyRelation> relations) {
  if (relations.empty()) throw InvalidArgument("conjoin needs at least one relation");
  const std::size_t n = relations.front().size();
  Matrix out = relations.front().matrix();
  FeatureSubset subset = relations.front().subset();
  for (const auto& rel : relations.subspan(1)) {
    if (rel.size() != n) throw InvalidArgument("relation size mismatch");
    auto dst = out.data();
    auto src = rel.matrix().data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::min(dst[k], src[k]);
    for (std::size_t f : rel.subset().indices())
      if (!subset.contains(f)) subset.push_back(f);
  }
  return {std::move(out), std::move(subset)};
}

FuzzyRelation relation_for(const Matrix& values, const FeatureSubset& subset) {
  FuzzyRelation rel = FuzzyRelation::ones(values.rows());
  for (std::size_t f : subset.indices()) {
    if (f >= values.cols()) throw InvalidArgument("feature index out of range");
    rel.conjoin_feature(values.column(f), f);
  }
  return rel;
}

double fuzzy_cardinality(const FuzzyRelation& relation, std::size_t i) {
  if (i >= relation.size()) throw InvalidArgument("sample index out of range");
  double sum = 0.0;
  for (double v : relation.row(i)) sum += v;
  return sum;
}

FuzzyLabelMatrix fuzzy_label(const FuzzyRelation& full_relation, std::span<const int> labels,
                             std::size_t num_classes) {
  const std::size_t n = full_relation.size();
  if (labels.size() != n) throw InvalidArgument("label count does not match relation size");
  Matrix fl(n, num_classes, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = full_relation.row(i);
    auto out = fl.row(i);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto q = static_cast<std::size_t>(labels[j]);
      if (q >= num_classes) throw InvalidArgument("label index out of range");
      out[q] += r[j];
      total += r[j];
    }
    for (double& v : out) v /= total;
  }
  return FuzzyLabelMatrix(std::move(fl));
}

FuzzyRelation label_relation(const FuzzyLabelMatrix& fl) {
  const std::size_t n = fl.num_samples();
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = fl.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = fl.row(j);
      double overlap = 0.0;
      for (std::size_t q = 0; q < a.size(); ++q) overlap += std::min(a[q], b[q]);
      overlap = std::min(overlap, 1.0);
      m(i, j) = overlap;
      m(j, i) = overlap;
    }
  }
  return {std::move(m), {}};
}

FuzzyRelation crisp_label_relation(std::span<const int> labels) {
  const std::size_t n = labels.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = labels[i] == labels[j] ? 1.0 : 0.0;
  return {std::move(m), {}};
}

ApproximationPair approximations(const FuzzyRelation& relation, const FuzzyLabelMatrix& fl,
                                 FuzzyOperators ops) {
  const std::size_t n = relation.size();
  const std::size_t p = fl.num_classes();
  if (fl.num_samples() != n) throw InvalidArgument("label matrix size mismatch");
  ApproximationPair out{Matrix(n, p, 1.0), Matrix(n, p, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = relation.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double neg = ops.negation(r[j]);
      for (std::size_t q = 0; q < p; ++q) {
        const double l = fl(j, q);
        out.lower(i, q) = std::min(out.lower(i, q), ops.t_conorm(neg, l));
        out.upper(i, q) = std::max(out.upper(i, q), ops.t_norm(r[j], l));
      }
    }
  }
  return out;
}

namespace {

constexpr std::array<char, 4> kRelationMagic{'F', 'R', 'M', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw DataError("truncated relation file");
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

}  // namespace

void write_relation(std::ostream& out, const FuzzyRelation& relation) {
  out.write(kRelationMagic.data(), kRelationMagic.size());
  put_u64(out, relation.size());
  for (double v : relation.matrix().data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

FuzzyRelation read_relation(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kRelationMagic) throw DataError("not a relation dump (bad magic)");
  const std::uint64_t n = get_u64(in);
  if (n > (std::uint64_t{1} << 20)) throw DataError("relation dump size implausible");
  Matrix m(n, n);
  for (double& v : m.data()) v = std::bit_cast<double>(get_u64(in));
  return {std::move(m), {}};
}

}  // namespace mafrfs
