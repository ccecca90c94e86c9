#include "mafrfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mafrfs/errors.hpp"

namespace mafrfs {

DataTable::DataTable(Matrix values, std::vector<int> labels, std::vector<std::string> feature_names,
                     std::vector<std::string> class_names)
    : values_(std::move(values)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
  const std::size_t n = values_.rows();
  const std::size_t m = values_.cols();
  const std::size_t p = class_names_.size();
  if (n < 2) throw DataError("dataset needs at least 2 samples, got " + std::to_string(n));
  if (m < 1) throw DataError("dataset needs at least 1 feature");
  if (p < 2) throw DataError("dataset needs at least 2 classes, got " + std::to_string(p));
  if (labels_.size() != n) throw InvalidArgument("label count does not match sample count");
  if (feature_names_.size() != m) throw InvalidArgument("feature name count does not match");
  for (double v : values_.data())
    if (!std::isfinite(v)) throw DataError("non-finite feature value");

  std::vector<std::size_t> counts(p, 0);
  for (int l : labels_) {
    if (l < 0 || static_cast<std::size_t>(l) >= p)
      throw InvalidArgument("label index out of range: " + std::to_string(l));
    ++counts[static_cast<std::size_t>(l)];
  }
  for (std::size_t q = 0; q < p; ++q)
    if (counts[q] == 0) throw DataError("class '" + class_names_[q] + "' has no samples");
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= num_samples()) throw InvalidArgument("row index out of range");
    labels.push_back(labels_[r]);
  }
  return DataTable(gather_rows(values_, rows), std::move(labels), feature_names_, class_names_);
}

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices) {
  for (std::size_t f : indices) push_back(f);
}

bool FeatureSubset::contains(std::size_t f) const {
  return std::find(indices_.begin(), indices_.end(), f) != indices_.end();
}

void FeatureSubset::push_back(std::size_t f) {
  if (contains(f)) throw InvalidArgument("feature " + std::to_string(f) + " already in subset");
  indices_.push_back(f);
}

FeatureSubset FeatureSubset::with(std::size_t f) const {
  FeatureSubset out = *this;
  out.push_back(f);
  return out;
}

LabelColumn LabelColumn::parse(const std::string& selector) {
  if (selector == "last") return last_column();
  return by_name(selector);
}

namespace {

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_records(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_record(line);
    for (auto& f : fields) f = trim(f);
    records.push_back(std::move(fields));
  }
  return records;
}

bool parse_finite(const std::string& cell, double& out) { return parse_number(cell, out); }

DataTable parse_csv(const std::string& text, const LabelColumn& label_column) {
  const auto records = read_csv_records(text);
  if (records.empty()) throw DataError("CSV has no header row");

  std::vector<std::string> header = records.front();
  for (auto& h : header) h = trim(h);
  const std::size_t width = header.size();
  if (width < 2) throw DataError("CSV needs at least one feature column and a label column");

  std::size_t label_idx = width - 1;
  if (!label_column.last) {
    const auto it = std::find(header.begin(), header.end(), label_column.name);
    if (it == header.end()) throw DataError("label column '" + label_column.name + "' not found");
    label_idx = static_cast<std::size_t>(it - header.begin());
  }

  const std::size_t n = records.size() - 1;
  if (n < 2) throw DataError("dataset needs at least 2 rows, got " + std::to_string(n));

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < width; ++c)
    if (c != label_idx) feature_names.push_back(header[c]);

  Matrix values(n, width - 1);
  std::vector<int> labels(n);
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_ids;

  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != width)
      throw ParseError(r + 1, std::min(rec.size(), width), "expected " + std::to_string(width) +
                                                               " fields, got " +
                                                               std::to_string(rec.size()));
    std::size_t f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_idx) {
        const std::string name = trim(rec[c]);
        if (name.empty()) throw ParseError(r + 1, c, "empty label");
        auto [it, inserted] = class_ids.emplace(name, static_cast<int>(class_names.size()));
        if (inserted) class_names.push_back(name);
        labels[r] = it->second;
        continue;
      }
      double v = 0.0;
      if (!parse_number(rec[c], v))
        throw ParseError(r + 1, c, "not a finite number: '" + rec[c] + "'");
      values(r, f++) = v;
    }
  }

  if (class_names.size() < 2) throw DataError("single-class dataset");
  return DataTable(std::move(values), std::move(labels), std::move(feature_names),
                   std::move(class_names));
}

DataTable load_csv(const std::filesystem::path& path, const LabelColumn& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column);
}

MinMaxScaler MinMaxScaler::fit(const Matrix& values) {
  MinMaxScaler s;
  s.mins_.assign(values.cols(), 0.0);
  s.maxs_.assign(values.cols(), 0.0);
  for (std::size_t c = 0; c < values.cols(); ++c) {
    double lo = values.rows() ? values(0, c) : 0.0;
    double hi = lo;
    for (std::size_t r = 1; r < values.rows(); ++r) {
      lo = std::min(lo, values(r, c));
      hi = std::max(hi, values(r, c));
    }
    s.mins_[c] = lo;
    s.maxs_[c] = hi;
  }
  return s;
}

Matrix MinMaxScaler::transform(const Matrix& values) const {
  if (values.cols() != mins_.size()) throw InvalidArgument("scaler column count mismatch");
  Matrix out(values.rows(), values.cols());
  for (std::size_t c = 0; c < values.cols(); ++c) {
    const double range = maxs_[c] - mins_[c];
    for (std::size_t r = 0; r < values.rows(); ++r) {
      if (!(range > 0.0)) {
        out(r, c) = 0.0;
        continue;
      }
      const double v = (values(r, c) - mins_[c]) / range;
      out(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

DataTable normalize(const DataTable& table) {
  const Matrix scaled = MinMaxScaler::fit(table.values()).transform(table.values());
  return DataTable(scaled, table.labels(), table.feature_names(), table.class_names());
}

Matrix project(const Matrix& values, std::span<const std::size_t> columns) {
  Matrix out(values.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] >= values.cols())
      throw InvalidArgument("feature index out of range: " + std::to_string(columns[j]));
  for (std::size_t r = 0; r < values.rows(); ++r)
    for (std::size_t j = 0; j < columns.size(); ++j) out(r, j) = values(r, columns[j]);
  return out;
}

Matrix project(const DataTable& table, const FeatureSubset& subset) {
  return project(table.values(), subset.indices());
}

Matrix gather_rows(const Matrix& values, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= values.rows()) throw InvalidArgument("row index out of range");
    const auto src = values.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

FoldPlan stratified_kfold(const DataTable& table, std::size_t k, std::uint64_t seed) {
  const std::size_t n = table.num_samples();
  if (k < 2) throw InvalidArgument("fold count must be at least 2");
  if (k > n)
    throw InvalidArgument("fold count " + std::to_string(k) + " exceeds sample count " +
                          std::to_string(n));

  // Fisher-Yates driven directly by the engine output; std::shuffle and
  // std::uniform_int_distribution are implementation-defined.
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> by_class(table.num_classes());
  for (std::size_t i = 0; i < n; ++i)
    by_class[static_cast<std::size_t>(table.labels()[i])].push_back(i);

  FoldPlan plan{k, seed, std::vector<std::size_t>(n, 0)};
  std::size_t dealt = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t idx : members) plan.assignments[idx] = dealt++ % k;
  }
  return plan;
}

}  // namespace mafrfs
