#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mafrfs/errors.hpp"
#include "mafrfs/eval.hpp"

namespace mafrfs {

RankMatrix rank_algorithms(const std::vector<std::vector<std::optional<double>>>& scores,
                           bool higher_is_better, std::vector<std::string> names) {
  RankMatrix out;
  out.names = std::move(names);
  for (const auto& row : scores) {
    const std::size_t s = row.size();
    std::vector<std::size_t> present;
    for (std::size_t j = 0; j < s; ++j) {
      if (!row[j]) continue;
      if (!std::isfinite(*row[j])) throw InvalidArgument("scores must be finite");
      present.push_back(j);
    }
    std::stable_sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
      return higher_is_better ? *row[a] > *row[b] : *row[a] < *row[b];
    });

    std::vector<double> ranks(s, 0.0);
    // Tied scores share the mean of the positions they span.
    for (std::size_t start = 0; start < present.size();) {
      std::size_t end = start + 1;
      while (end < present.size() && *row[present[end]] == *row[present[start]]) ++end;
      const double mean_rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
      for (std::size_t t = start; t < end; ++t) ranks[present[t]] = mean_rank;
      start = end;
    }
    // Absent entries tie for the worst positions.
    const std::size_t absent = s - present.size();
    if (absent > 0) {
      const double worst =
          (static_cast<double>(present.size() + 1) + static_cast<double>(s)) / 2.0;
      for (std::size_t j = 0; j < s; ++j)
        if (!row[j]) ranks[j] = worst;
    }
    out.ranks.push_back(std::move(ranks));
  }
  return out;
}

FriedmanResult friedman(const RankMatrix& ranks, std::optional<double> q_alpha) {
  const std::size_t n = ranks.ranks.size();
  if (n < 2) throw InvalidArgument("Friedman test needs at least 2 datasets");
  const std::size_t s = ranks.ranks.front().size();
  if (s < 2) throw InvalidArgument("Friedman test needs at least 2 algorithms");
  for (const auto& row : ranks.ranks)
    if (row.size() != s) throw InvalidArgument("rank matrix rows differ in length");

  FriedmanResult r;
  r.avg_ranks.assign(s, 0.0);
  for (const auto& row : ranks.ranks)
    for (std::size_t j = 0; j < s; ++j) r.avg_ranks[j] += row[j];
  for (double& v : r.avg_ranks) v /= static_cast<double>(n);

  const double dn = static_cast<double>(n);
  const double ds = static_cast<double>(s);
  double sum_sq = 0.0;
  for (double v : r.avg_ranks) sum_sq += v * v;
  r.chi_sq = 12.0 * dn / (ds * (ds + 1.0)) * (sum_sq - ds * (ds + 1.0) * (ds + 1.0) / 4.0);
  if (r.chi_sq < 0.0 && r.chi_sq > -1e-12) r.chi_sq = 0.0;

  const double limit = dn * (ds - 1.0);
  const double denom = limit - r.chi_sq;
  if (std::abs(denom) <= 1e-12 * limit) throw PerfectConsistency(r.chi_sq);
  r.f_stat = (dn - 1.0) * r.chi_sq / denom;
  r.dof1 = s - 1;
  r.dof2 = (s - 1) * (n - 1);
  if (q_alpha) {
    r.q_alpha = q_alpha;
    r.cd = nemenyi_cd(s, n, *q_alpha);
  }
  return r;
}

double nemenyi_cd(std::size_t s, std::size_t n, double q_alpha) {
  if (s < 2) throw InvalidArgument("Nemenyi CD needs at least 2 algorithms");
  if (n < 1) throw InvalidArgument("Nemenyi CD needs at least 1 dataset");
  if (q_alpha < 0.0) throw InvalidArgument("q_alpha must be non-negative");
  const double ds = static_cast<double>(s);
  return q_alpha * std::sqrt(ds * (ds + 1.0) / (6.0 * static_cast<double>(n)));
}

std::optional<double> nemenyi_q_alpha_05(std::size_t s) {
  // Studentized range quantiles divided by sqrt(2), alpha = 0.05.
  static constexpr std::array<double, 9> kTable{1.960, 2.343, 2.569, 2.728, 2.850,
                                                2.949, 3.031, 3.102, 3.164};
  if (s < 2 || s > 10) return std::nullopt;
  return kTable[s - 2];
}

std::vector<std::pair<std::size_t, std::size_t>> significant_pairs(
    std::span<const double> avg_ranks, double cd) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < avg_ranks.size(); ++a)
    for (std::size_t b = a + 1; b < avg_ranks.size(); ++b)
      if (std::abs(avg_ranks[a] - avg_ranks[b]) > cd) out.emplace_back(a, b);
  return out;
}

}  // namespace mafrfs
