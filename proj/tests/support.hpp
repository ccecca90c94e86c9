#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mafrfs/dataset.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MAFRFS_DATA_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mafrfs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Uniform values in [lo, hi); the first p rows cover every class once.
inline mafrfs::DataTable random_table(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                      std::size_t p, double lo = 0.0, double hi = 10.0) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_int_distribution<int> label(0, static_cast<int>(p) - 1);
  mafrfs::Matrix values(n, m);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < m; ++f) values(i, f) = value(rng);
    labels[i] = i < p ? static_cast<int>(i) : label(rng);
  }
  std::vector<std::string> features, classes;
  for (std::size_t f = 0; f < m; ++f) features.push_back("f" + std::to_string(f));
  for (std::size_t q = 0; q < p; ++q) classes.push_back("c" + std::to_string(q));
  return mafrfs::DataTable(std::move(values), std::move(labels), std::move(features),
                           std::move(classes));
}

// Random sizes within the given caps (n >= p + 1, p >= 2).
struct Shape {
  std::size_t n, m, p;
};
inline Shape random_shape(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m,
                          std::size_t max_p, std::size_t min_m = 1) {
  const std::size_t p = std::uniform_int_distribution<std::size_t>(2, max_p)(rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(p + 1, max_n)(rng);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(min_m, max_m)(rng);
  return {n, m, p};
}

inline std::vector<std::size_t> random_subset(std::mt19937_64& rng, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < m; ++f)
    if (rng() % 2) out.push_back(f);
  if (out.empty()) out.push_back(rng() % m);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace testing_support
