#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "mafrfs/errors.hpp"
#include "mafrfs/margins.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mafrfs;

namespace {

Matrix column_matrix(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

const std::vector<double> kLine{0.0, 0.2, 0.8, 1.0};
const std::vector<int> kLineLabels{0, 0, 1, 1};
constexpr double kBig = std::numeric_limits<double>::max();

}  // namespace

TEST_CASE("class centers") {
  const auto c = class_centers(column_matrix(kLine), kLineLabels, 2);
  CHECK(c.per_class(0, 0) == doctest::Approx(0.1));
  CHECK(c.per_class(1, 0) == doctest::Approx(0.9));
  CHECK(c.overall[0] == doctest::Approx(0.5));

  const auto single = class_centers(column_matrix({0.3, 0.7}), std::vector<int>{0, 1}, 2);
  CHECK(single.per_class(0, 0) == 0.3);
  CHECK(single.per_class(1, 0) == 0.7);

  const auto flat = class_centers(column_matrix({0.4, 0.4, 0.4}), std::vector<int>{0, 1, 0}, 2);
  CHECK(flat.per_class(0, 0) == flat.per_class(1, 0));

  CHECK_THROWS_AS(class_centers(column_matrix({0.1, 0.2}), std::vector<int>{0, 0}, 2), DataError);
}

TEST_CASE("the two-class line") {
  const auto m = column_matrix(kLine);
  const auto c = class_centers(m, kLineLabels, 2);
  CHECK(within_margin(m, kLineLabels, c) == doctest::Approx(0.2));
  CHECK(between_margin_global(c) == doctest::Approx(0.8));
  CHECK(between_margin_local(c) == doctest::Approx(0.8));
  const auto r = wbmr(m, kLineLabels, 2);
  CHECK(r.wbmr_g == doctest::Approx(0.25));
  CHECK(r.wbmr_l == doctest::Approx(0.25));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("duplicating every sample leaves the within margin alone") {
  const std::vector<double> doubled{0.0, 0.2, 0.8, 1.0, 0.0, 0.2, 0.8, 1.0};
  const std::vector<int> labels{0, 0, 1, 1, 0, 0, 1, 1};
  CHECK(wbmr(column_matrix(doubled), labels, 2).theta == doctest::Approx(0.2));
}

TEST_CASE("one sample per class") {
  const auto r = wbmr(column_matrix({0.1, 0.6}), std::vector<int>{0, 1}, 2);
  CHECK(r.theta == 0.0);
  CHECK(r.wbmr_g == 0.0);
  CHECK(r.lambda_g > 0.0);
}

TEST_CASE("coincident centers are degenerate") {
  const auto r = wbmr(column_matrix({0.0, 1.0, 0.0, 1.0}), std::vector<int>{0, 0, 1, 1}, 2);
  CHECK(r.lambda_g == 0.0);
  CHECK(r.delta_l == 0.0);
  CHECK(r.degenerate);
  CHECK(r.wbmr_g == kBig);
}

TEST_CASE("collinear centers") {
  const auto c = class_centers(column_matrix({0.0, 1.0, 2.0}), std::vector<int>{0, 1, 2}, 3);
  CHECK(between_margin_local(c) == doctest::Approx(4.0));
}

TEST_CASE("margin delta examples") {
  // F' empty, candidate = the line feature.
  Matrix two(4, 2);
  for (std::size_t i = 0; i < 4; ++i) two(i, 0) = two(i, 1) = kLine[i];
  CHECK(margin_delta(two, kLineLabels, 2, FeatureSubset(std::vector<std::size_t>{}), 0, MarginStrategy::Global) ==
        doctest::Approx(0.25));
  // Exact duplicate of the selected column.
  CHECK(margin_delta(two, kLineLabels, 2, FeatureSubset(std::vector<std::size_t>{0}), 1, MarginStrategy::Global) ==
        doctest::Approx(0.0));
  CHECK(margin_delta(two, kLineLabels, 2, FeatureSubset(std::vector<std::size_t>{0}), 1, MarginStrategy::Local) ==
        doctest::Approx(0.0));

  // A candidate whose class centers coincide worsens the ratio.
  Matrix bad(4, 2);
  const std::vector<double> noise{0.0, 1.0, 1.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) {
    bad(i, 0) = kLine[i];
    bad(i, 1) = noise[i];
  }
  CHECK(margin_delta(bad, kLineLabels, 2, FeatureSubset(std::vector<std::size_t>{0}), 1, MarginStrategy::Global) > 0.5);
}

TEST_CASE("property: reference margins, translation and scaling") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = testing_support::random_shape(rng, 30, 5, 4);
    const auto t = testing_support::random_table(rng, shape.n, shape.m, shape.p, -3.0, 3.0);
    const auto sub = testing_support::random_subset(rng, shape.m);
    const auto proj = project(t, FeatureSubset(sub));

    oracle::Mat x(shape.n, std::vector<double>(shape.m));
    for (std::size_t i = 0; i < shape.n; ++i)
      for (std::size_t f = 0; f < shape.m; ++f) x[i][f] = t.values()(i, f);
    const auto ref = oracle::margins(x, sub, t.labels(), shape.p);
    const auto got = wbmr(proj, t.labels(), shape.p);
    CHECK(std::abs(got.theta - ref.theta) <= 1e-10);
    CHECK(std::abs(got.lambda_g - ref.lambda) <= 1e-10);
    CHECK(std::abs(got.delta_l - ref.delta) <= 1e-10);
    CHECK(std::abs(got.wbmr_g - ref.wbmr_g) <= 1e-10 * std::max(1.0, ref.wbmr_g));

    Matrix shifted = proj, scaled = proj;
    for (std::size_t i = 0; i < proj.rows(); ++i)
      for (std::size_t k = 0; k < proj.cols(); ++k) {
        shifted(i, k) += 5.5 - 2.0 * static_cast<double>(k);
        scaled(i, k) *= 3.0;
      }
    const auto moved = wbmr(shifted, t.labels(), shape.p);
    CHECK(std::abs(moved.theta - got.theta) <= 1e-12);
    CHECK(std::abs(moved.lambda_g - got.lambda_g) <= 1e-12);
    CHECK(std::abs(moved.wbmr_g - got.wbmr_g) <= 1e-12 * std::max(1.0, got.wbmr_g));
    CHECK(wbmr(scaled, t.labels(), shape.p).wbmr_l == doctest::Approx(got.wbmr_l));
  }
}

TEST_CASE("incremental state matches full recomputation") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto shape = testing_support::random_shape(rng, 25, 5, 4, 2);
    const auto t = testing_support::random_table(rng, shape.n, shape.m, shape.p);
    MarginState state(t.labels(), shape.p);
    std::vector<std::size_t> chosen;
    for (std::size_t f = 0; f < shape.m; ++f) {
      const auto col = t.values().column(f);
      const auto with = state.evaluate_with(col);
      const auto full = wbmr(project(t, FeatureSubset(oracle::plus(chosen, f))), t.labels(), shape.p);
      CHECK(with.theta == doctest::Approx(full.theta).epsilon(1e-12));
      CHECK(with.wbmr_l == doctest::Approx(full.wbmr_l).epsilon(1e-12));
      CHECK(margin_delta(t.values(), t.labels(), shape.p, FeatureSubset(chosen), f,
                         MarginStrategy::Global) ==
            doctest::Approx(full.wbmr_g - (chosen.empty() ? 0.0 : state.current().wbmr_g)));
      state.add(col);
      chosen.push_back(f);
    }
  }
}

TEST_CASE("names") {
  CHECK(parse_strategy("local") == MarginStrategy::Local);
  CHECK(parse_empty_wbmr("skip-first") == EmptyWbmrPolicy::SkipFirst);
  CHECK_THROWS_AS(parse_strategy("both"), InvalidArgument);
}
