#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "mafrfs/cli.hpp"
#include "mafrfs/errors.hpp"
#include "mafrfs/serialize.hpp"
#include "support.hpp"

using namespace mafrfs;
namespace fs = std::filesystem;
using testing_support::fixture;
using testing_support::scratch_dir;
using testing_support::slurp;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sweep6() { return fixture("fixtures/sweep6.csv").string(); }
std::string separable() { return fixture("fixtures/separable.csv").string(); }

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("ranking results survive a JSON round trip") {
  RankingResult r;
  r.config.sop = 2;
  r.config.k = 3;
  r.config.strategy = MarginStrategy::Local;
  r.fold_id = 4;
  r.order = {2, 0, 1};
  r.fitness_trace = {0.1, 0.25, 1e-17};
  r.value_trace = {0.1, 0.35, 0.35};
  r.pool_trace = {{2, 0}, {0, 1}, {1}};
  MarginStep step;
  step.deltas = {0.5, std::numeric_limits<double>::max()};
  MarginReport rep;
  rep.theta = 0.2;
  rep.wbmr_g = 0.25;
  rep.degenerate = true;
  step.reports = {rep, rep};
  r.margin_trace = {step, step, step};
  r.fitness_evaluations = 9;

  const auto back = ranking_from_json(Json::parse(dump(to_json(r))));
  CHECK(back.order == r.order);
  CHECK(back.fitness_trace == r.fitness_trace);
  CHECK(back.pool_trace == r.pool_trace);
  CHECK(back.fold_id == r.fold_id);
  CHECK(back.config.k == r.config.k);
  CHECK(back.config.strategy == MarginStrategy::Local);
  CHECK(back.margin_trace[1].deltas == step.deltas);
  CHECK(back.margin_trace[0].reports[1].degenerate);
  CHECK(back.fitness_evaluations == 9);
  CHECK(dump(to_json(back)) == dump(to_json(r)));

  const auto j = to_json(rep);
  CHECK(j.begin().key() == "theta");
  CHECK(j.contains("lambda_g"));
  CHECK(j.contains("delta_l"));
}

TEST_CASE("fold plans and reports serialize") {
  FoldPlan plan{3, 42, {0, 1, 2, 0}};
  CHECK(fold_plan_from_json(to_json(plan)) == plan);
  CHECK_THROWS_AS(fold_plan_from_json(Json{{"k", 2}, {"seed", 1}, {"assignments", {0, 5}}}),
                  DataError);

  CvReport cv;
  cv.cuts = {30, 50};
  cv.cut_sizes = {1, 2};
  cv.per_fold_accuracy = {{1.0, 0.5}, {0.25, 0.75}};
  CHECK(to_csv(cv) == "fold,cut,accuracy\n0,30,1\n0,50,0.5\n1,30,0.25\n1,50,0.75\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("rank writes one file per fold and a summary") {
  const auto dir = scratch_dir("rank");
  const auto r = cli({"rank", "--data", sweep6(), "--label", "last", "--framework", "mafrfs",
                      "--measure", "fd", "--sop", "3", "--strategy", "global", "--folds", "5",
                      "--seed", "42", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("seed: 42\n", 0) == 0);
  for (int f = 0; f < 5; ++f) CHECK(fs::exists(dir / ("ranking_fold_0" + std::to_string(f) + ".json")));
  CHECK_FALSE(fs::exists(dir / "ranking_fold_05.json"));
  CHECK(fs::exists(dir / "run.json"));
  CHECK(fs::exists(dir / "folds.json"));
  CHECK(count_lines(slurp(dir / "summary.csv")) == 7);
  const auto j = Json::parse(slurp(dir / "ranking_fold_03.json"));
  CHECK(j.at("fold") == 3);
  CHECK(j.at("order").size() == 6);
  CHECK(j.at("margin_trace").size() == 6);
}

TEST_CASE("pool of one and FRFS write the same orders") {
  const auto a = scratch_dir("sop1"), b = scratch_dir("frfs");
  REQUIRE(cli({"rank", "--data", sweep6(), "--framework", "mafrfs", "--sop", "1", "--folds", "4",
               "--out", a.string()}).code == 0);
  REQUIRE(cli({"rank", "--data", sweep6(), "--framework", "frfs", "--folds", "4", "--out",
               b.string()}).code == 0);
  for (int f = 0; f < 4; ++f) {
    const std::string name = "ranking_fold_0" + std::to_string(f) + ".json";
    CHECK(Json::parse(slurp(a / name)).at("order") == Json::parse(slurp(b / name)).at("order"));
  }
}

TEST_CASE("usage errors exit with 2") {
  const auto dir = scratch_dir("usage");
  auto r = cli({"rank", "--data", sweep6(), "--sop", "0", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: InvalidArgument:", 0) == 0);
  CHECK(count_lines(r.err) == 1);

  CHECK(cli({"rank", "--data", sweep6(), "--measure", "xyz", "--out", dir.string()}).code == 2);
  CHECK(cli({"rank", "--data", sweep6(), "--bogus", "--out", dir.string()}).code == 2);
  CHECK(cli({"rank", "--out", dir.string()}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"rank", "--data", sweep6(), "--folds", "1", "--out", dir.string()}).code == 2);
  CHECK(cli({"rank", "--data", sweep6(), "--threads", "0", "--out", dir.string()}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 4") {
  const auto dir = scratch_dir("data");
  auto r = cli({"rank", "--data", (dir / "missing.csv").string(), "--out", dir.string()});
  CHECK(r.code == 4);
  write(dir / "bad.csv", "a,b,c\n1,2,x\n3,oops,y\n4,5,x\n");
  r = cli({"rank", "--data", (dir / "bad.csv").string(), "--folds", "2", "--out", dir.string()});
  CHECK(r.code == 4);
  CHECK(r.err.find("ParseError") != std::string::npos);
}

TEST_CASE("eval after rank on the separable fixture") {
  const auto ranks = scratch_dir("sep_rank"), evals = scratch_dir("sep_eval");
  REQUIRE(cli({"rank", "--data", separable(), "--folds", "5", "--out", ranks.string()}).code == 0);
  const auto r = cli({"eval", "--data", separable(), "--folds", "5", "--rankings", ranks.string(),
                      "--out", evals.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("grand_mean: 1.0000") != std::string::npos);
  const auto j = Json::parse(slurp(evals / "cv_report.json"));
  CHECK(j.at("grand_mean").get<double>() == 1.0);
  CHECK(count_lines(slurp(evals / "cv_report.csv")) == 1 + 5 * 4);
}

TEST_CASE("eval refuses rankings from another fold plan") {
  const auto ranks = scratch_dir("mm_rank"), evals = scratch_dir("mm_eval");
  REQUIRE(cli({"rank", "--data", separable(), "--folds", "4", "--seed", "1", "--out",
               ranks.string()}).code == 0);
  const auto r = cli({"eval", "--data", separable(), "--folds", "4", "--seed", "2",
                      "--rankings", ranks.string(), "--out", evals.string()});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ConfigHashMismatch:", 0) == 0);
  CHECK(cli({"eval", "--data", separable(), "--folds", "5", "--seed", "1", "--rankings",
             ranks.string(), "--out", evals.string()}).code == 2);
}

TEST_CASE("cut sizes on ten features") {
  const auto dir = scratch_dir("ten");
  std::mt19937_64 rng(3);
  std::string csv = "f0,f1,f2,f3,f4,f5,f6,f7,f8,f9,y\n";
  for (int i = 0; i < 30; ++i) {
    for (int f = 0; f < 10; ++f) csv += std::to_string(rng() % 100) + ",";
    csv += (i % 2 ? "a" : "b");
    csv += "\n";
  }
  write(dir / "ten.csv", csv);
  const auto data = (dir / "ten.csv").string();
  REQUIRE(cli({"rank", "--data", data, "--framework", "frfs", "--measure", "fe", "--folds", "3",
               "--out", (dir / "r").string()}).code == 0);
  REQUIRE(cli({"eval", "--data", data, "--folds", "3", "--rankings", (dir / "r").string(),
               "--cuts", "30,50,70,90", "--out", (dir / "e").string()}).code == 0);
  const auto j = Json::parse(slurp(dir / "e" / "cv_report.json"));
  CHECK(j.at("cut_sizes") == Json::parse("[3,5,7,9]"));
}

TEST_CASE("compare prints the Friedman statistics") {
  const auto dir = scratch_dir("compare");
  write(dir / "small.csv", "dataset,A,B,C\nd1,0.9,0.8,0.7\nd2,0.9,0.8,0.7\nd3,0.8,0.9,0.7\nd4,0.9,0.7,0.8\n");
  auto r = cli({"compare", "--scores", (dir / "small.csv").string(), "--out", (dir / "o1").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("chi_sq: 4.5000") != std::string::npos);
  CHECK(r.out.find("f_stat: 3.8571") != std::string::npos);
  CHECK(r.out.find("dof: 2,6") != std::string::npos);
  CHECK(fs::exists(dir / "o1" / "friedman.json"));

  std::mt19937_64 rng(8);
  std::string big = "m1,m2,m3,m4,m5,m6,m7,m8\n";
  for (int row = 0; row < 15; ++row) {
    for (int c = 0; c < 8; ++c) big += (c ? "," : "") + std::to_string(static_cast<double>(rng() % 1000) / 1000.0);
    big += "\n";
  }
  write(dir / "big.csv", big);
  r = cli({"compare", "--scores", (dir / "big.csv").string(), "--q-alpha", "3.0310", "--out",
           (dir / "o2").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("cd: 2.7110") != std::string::npos);

  write(dir / "one.csv", "dataset,A\nd1,0.5\nd2,0.6\n");
  r = cli({"compare", "--scores", (dir / "one.csv").string(), "--out", (dir / "o3").string()});
  CHECK(r.code == 2);

  write(dir / "same.csv", "A,B,C\n3,2,1\n3,2,1\n3,2,1\n");
  r = cli({"compare", "--scores", (dir / "same.csv").string(), "--out", (dir / "o4").string()});
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error: PerfectConsistency:", 0) == 0);

  write(dir / "gaps.csv", "dataset,A,B,C\nd1,0.9,,0.7\nd2,0.5,0.8,0.7\nd3,0.8,0.9,\n");
  r = cli({"compare", "--scores", (dir / "gaps.csv").string(), "--lower-is-better", "--out",
           (dir / "o5").string()});
  CHECK(r.code == 0);
}

TEST_CASE("sweep covers the grid and is reproducible") {
  const auto a = scratch_dir("sweep_a"), b = scratch_dir("sweep_b");
  const std::vector<std::string> args{"sweep", "--data", sweep6(), "--sops", "1,2,3", "--strategies",
                                      "global,local", "--folds", "3", "--cuts", "30,50,70,90"};
  auto with_out = [&](const fs::path& d) {
    auto v = args;
    v.push_back("--out");
    v.push_back(d.string());
    return v;
  };
  REQUIRE(cli(with_out(a)).code == 0);
  REQUIRE(cli(with_out(b)).code == 0);
  const auto csv = slurp(a / "sweep.csv");
  CHECK(count_lines(csv) == 1 + 6 * 3 * 4);
  CHECK(csv == slurp(b / "sweep.csv"));

  // sop 1 rows agree between strategies once the strategy column is dropped.
  std::istringstream in(csv);
  std::string line;
  std::map<std::string, std::set<std::string>> by_rest;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells[2] != "1") continue;
    by_rest[cells[4] + "," + cells[5]].insert(cells[7]);
  }
  CHECK(by_rest.size() == 3 * 4);
  for (const auto& [key, values] : by_rest) CHECK(values.size() == 1);
}

TEST_CASE("replay reproduces outputs byte for byte") {
  const auto first = scratch_dir("replay_a"), second = scratch_dir("replay_b");
  REQUIRE(cli({"rank", "--data", sweep6(), "--measure", "fmi", "--strategy", "local", "--folds",
               "3", "--out", first.string()}).code == 0);
  REQUIRE(cli({"replay", (first / "run.json").string(), "--out", second.string(), "--threads", "3"})
              .code == 0);
  for (const auto& entry : fs::directory_iterator(first))
    CHECK(slurp(entry.path()) == slurp(second / entry.path().filename()));
}

TEST_CASE("thread count fallback from the environment") {
  const auto dir = scratch_dir("env");
  ::setenv("MAFRFS_THREADS", "abc", 1);
  CHECK(cli({"rank", "--data", separable(), "--folds", "2", "--out", dir.string()}).code == 2);
  ::setenv("MAFRFS_THREADS", "4", 1);
  CHECK(cli({"rank", "--data", separable(), "--folds", "2", "--out", dir.string()}).code == 0);
  ::unsetenv("MAFRFS_THREADS");
}
