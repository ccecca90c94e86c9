#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mafrfs {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or invalid configuration (CLI exit code 2).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Rankings were produced for a different dataset or fold plan.
class ConfigHashMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

// Problem with input data (CLI exit code 4).
class DataError : public Error {
public:
  using Error::Error;
};

class ParseError : public DataError {
public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : DataError("ParseError{row=" + std::to_string(row) + ", col=" + std::to_string(col) +
                  "}: " + what),
        row_(row), col_(col) {}

  // 1-based data row (header excluded) and 0-based column.
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

private:
  std::size_t row_;
  std::size_t col_;
};

class EmptyClassInFold : public DataError {
public:
  EmptyClassInFold(std::size_t fold, std::size_t cls)
      : DataError("EmptyClassInFold{fold=" + std::to_string(fold) +
                  ", class=" + std::to_string(cls) + "}"),
        fold_(fold), cls_(cls) {}

  std::size_t fold() const { return fold_; }
  std::size_t class_index() const { return cls_; }

private:
  std::size_t fold_;
  std::size_t cls_;
};

// Statistical degeneracy (CLI exit code 3).
class StatisticalDegeneracy : public Error {
public:
  using Error::Error;
};

// Friedman denominator N(s-1) - chi^2 vanished: every dataset ranks the algorithms identically.
class PerfectConsistency : public StatisticalDegeneracy {
public:
  explicit PerfectConsistency(double chi_sq)
      : StatisticalDegeneracy("PerfectConsistency{chi_sq=" + std::to_string(chi_sq) + "}"),
        chi_sq_(chi_sq) {}

  double chi_sq() const { return chi_sq_; }

private:
  double chi_sq_;
};

}  // namespace mafrfs
