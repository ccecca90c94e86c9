#include "mafrfs/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mafrfs/dataset.hpp"
#include "mafrfs/errors.hpp"

namespace mafrfs {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
  if (!out) throw DataError("failed writing file: " + path.string());
}

fs::path prepare_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw InvalidArgument("--out is required");
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void write_run_json(const fs::path& dir, const RunConfig& cfg) {
  Json j{{"tool", "mafrfs"}, {"version", MAFRFS_VERSION}, {"seed", cfg.seed},
         {"config", to_json(cfg)}};
  write_file(dir / "run.json", dump(j));
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string ranking_file_name(std::size_t fold) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "ranking_fold_%02zu.json", fold);
  return buf;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.data.empty()) throw InvalidArgument("--data is required");
  if (cfg.folds < 2) throw InvalidArgument("--folds must be at least 2");
  if (cfg.threads < 1) throw InvalidArgument("--threads must be at least 1");
}

void validate_eval_options(const EvalOptions& opts) {
  if (opts.cuts.empty()) throw InvalidArgument("--cuts needs at least one value");
  for (double c : opts.cuts)
    if (!(c > 0.0 && c <= 100.0)) throw InvalidArgument("cut percentages must lie in (0, 100]");
  if (opts.neighbors < 1) throw InvalidArgument("--neighbors must be at least 1");
}

template <typename T, typename F>
Json names_of(const std::vector<T>& items, F to_str) {
  Json arr = Json::array();
  for (const auto& item : items) arr.push_back(std::string(to_str(item)));
  return arr;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigHashMismatch*>(&e)) return "ConfigHashMismatch";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const PerfectConsistency*>(&e)) return "PerfectConsistency";
  if (dynamic_cast<const StatisticalDegeneracy*>(&e)) return "StatisticalDegeneracy";
  if (dynamic_cast<const EmptyClassInFold*>(&e)) return "EmptyClassInFold";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const DataError*>(&e)) return "DataError";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "DataError";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "DataError";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitUsage;
  if (dynamic_cast<const StatisticalDegeneracy*>(&e)) return kExitDegenerate;
  if (dynamic_cast<const DataError*>(&e)) return kExitData;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitData;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitData;
  return 1;
}

void report_error(std::ostream& err, const std::string& kind, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  err << "error: " << kind << ": " << message << "\n";
}

std::size_t resolve_threads(const std::string& flag) {
  std::string text = flag;
  if (text.empty()) {
    const char* env = std::getenv("MAFRFS_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    text = env;
  }
  std::size_t value = 0;
  std::size_t used = 0;
  try {
    value = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 1 || text.front() == '-')
    throw InvalidArgument("thread count must be a positive integer, got '" + text + "'");
  return value;
}

std::vector<RankingResult> load_rankings(const fs::path& dir, std::size_t folds,
                                         const std::string& expected_hash,
                                         std::size_t num_features) {
  std::vector<RankingResult> rankings;
  for (std::size_t f = 0; f < folds; ++f) {
    const fs::path path = dir / ranking_file_name(f);
    if (!fs::exists(path)) throw DataError("missing ranking file: " + path.string());
    const Json j = Json::parse(read_file(path));
    const std::string hash = j.value("config_hash", std::string{});
    if (hash != expected_hash)
      throw ConfigHashMismatch("ranking " + path.string() + " was produced for config " + hash +
                               ", but this run is " + expected_hash);
    RankingResult r = ranking_from_json(j);
    for (std::size_t feature : r.order)
      if (feature >= num_features) throw DataError("ranking refers to a feature out of range");
    rankings.push_back(std::move(r));
  }
  return rankings;
}

void print_cv(std::ostream& out, const CvReport& report) {
  out << "cut,features,mean_accuracy\n";
  for (std::size_t c = 0; c < report.cuts.size(); ++c)
    out << format_double(report.cuts[c]) << "," << report.cut_sizes[c] << ","
        << fixed4(report.mean_per_cut[c]) << "\n";
  out << "grand_mean: " << fixed4(report.grand_mean) << "\n";
}

}  // namespace

std::string config_hash(const std::string& data_path, const std::string& label, std::size_t folds,
                        std::uint64_t seed) {
  std::string bytes = read_file(data_path);
  bytes += "\nlabel=" + label + "\nfolds=" + std::to_string(folds) +
           "\nseed=" + std::to_string(seed);
  return fnv1a_hex(bytes);
}

Json to_json(const RunConfig& cfg) {
  Json j{{"command", cfg.command}};
  if (cfg.command == "compare") {
    j["scores"] = cfg.scores;
    j["q_alpha"] = cfg.q_alpha ? Json(*cfg.q_alpha) : Json(nullptr);
    j["lower_is_better"] = cfg.lower_is_better;
    return j;
  }
  j["data"] = cfg.data;
  j["label"] = cfg.label;
  j["folds"] = cfg.folds;
  j["seed"] = cfg.seed;
  if (cfg.command == "rank" || cfg.command == "sweep") j["selector"] = to_json(cfg.selector);
  if (cfg.command == "eval" || cfg.command == "sweep") {
    j["cuts"] = cfg.eval.cuts;
    j["neighbors"] = cfg.eval.neighbors;
    j["cut_rounding"] = std::string(to_string(cfg.eval.rounding));
  }
  if (cfg.command == "eval") j["rankings"] = cfg.rankings;
  if (cfg.command == "sweep") {
    j["measures"] = names_of(cfg.measures, [](MeasureKind k) { return to_string(k); });
    j["frameworks"] = names_of(cfg.frameworks, [](Framework f) { return to_string(f); });
    j["sops"] = cfg.sops;
    j["strategies"] = names_of(cfg.strategies, [](MarginStrategy s) { return to_string(s); });
  }
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  cfg.command = j.at("command").get<std::string>();
  if (cfg.command == "compare") {
    cfg.scores = j.at("scores").get<std::string>();
    if (!j.at("q_alpha").is_null()) cfg.q_alpha = j.at("q_alpha").get<double>();
    cfg.lower_is_better = j.at("lower_is_better").get<bool>();
    return cfg;
  }
  if (cfg.command != "rank" && cfg.command != "eval" && cfg.command != "sweep")
    throw DataError("run.json has unknown command '" + cfg.command + "'");
  cfg.data = j.at("data").get<std::string>();
  cfg.label = j.at("label").get<std::string>();
  cfg.folds = j.at("folds").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("selector")) cfg.selector = selector_config_from_json(j.at("selector"));
  if (j.contains("cuts")) {
    cfg.eval.cuts = j.at("cuts").get<std::vector<double>>();
    cfg.eval.neighbors = j.at("neighbors").get<std::size_t>();
    cfg.eval.rounding = parse_cut_rounding(j.at("cut_rounding").get<std::string>());
  }
  if (j.contains("rankings")) cfg.rankings = j.at("rankings").get<std::string>();
  if (cfg.command == "sweep") {
    for (const auto& s : j.at("measures")) cfg.measures.push_back(parse_measure(s.get<std::string>()));
    for (const auto& s : j.at("frameworks"))
      cfg.frameworks.push_back(parse_framework(s.get<std::string>()));
    cfg.sops = j.at("sops").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("strategies"))
      cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
  }
  return cfg;
}

void cmd_rank(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const DataTable table = load_csv(cfg.data, LabelColumn::parse(cfg.label));
  cfg.selector.validate(table.num_features());
  const fs::path dir = prepare_out(cfg);

  out << "seed: " << cfg.seed << "\n";
  const FoldPlan plan = stratified_kfold(table, cfg.folds, cfg.seed);
  const std::string hash = config_hash(cfg.data, cfg.label, cfg.folds, cfg.seed);
  const auto rankings = rank_all_folds(table, plan, cfg.selector, cfg.threads);

  write_run_json(dir, cfg);
  write_file(dir / "folds.json", dump(to_json(plan)));
  for (const auto& r : rankings) {
    Json j = to_json(r);
    j["config_hash"] = hash;
    write_file(dir / ranking_file_name(*r.fold_id), dump(j));
  }

  // Mean 1-based position over the folds whose ranking contains the feature.
  const std::size_t m = table.num_features();
  std::vector<double> pos_sum(m, 0.0);
  std::vector<std::size_t> seen(m, 0);
  for (const auto& r : rankings)
    for (std::size_t p = 0; p < r.order.size(); ++p) {
      pos_sum[r.order[p]] += static_cast<double>(p + 1);
      ++seen[r.order[p]];
    }
  std::vector<std::size_t> features;
  for (std::size_t f = 0; f < m; ++f)
    if (seen[f] > 0) features.push_back(f);
  auto mean_pos = [&](std::size_t f) { return pos_sum[f] / static_cast<double>(seen[f]); };
  std::stable_sort(features.begin(), features.end(),
                   [&](std::size_t a, std::size_t b) { return mean_pos(a) < mean_pos(b); });

  std::string csv = "rank,feature,name,mean_position,folds\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t f = features[i];
    csv += std::to_string(i + 1) + "," + std::to_string(f) + "," + table.feature_names()[f] + "," +
           format_double(mean_pos(f)) + "," + std::to_string(seen[f]) + "\n";
  }
  write_file(dir / "summary.csv", csv);

  out << "config_hash: " << hash << "\n";
  out << "rankings: " << rankings.size() << "\n";
  out << "rank,feature,name,mean_position\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t f = features[i];
    out << i + 1 << "," << f << "," << table.feature_names()[f] << "," << fixed4(mean_pos(f))
        << "\n";
  }
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  validate_eval_options(cfg.eval);
  if (cfg.rankings.empty()) throw InvalidArgument("--rankings is required");
  const DataTable table = load_csv(cfg.data, LabelColumn::parse(cfg.label));
  const fs::path dir = prepare_out(cfg);

  out << "seed: " << cfg.seed << "\n";
  const FoldPlan plan = stratified_kfold(table, cfg.folds, cfg.seed);
  const std::string hash = config_hash(cfg.data, cfg.label, cfg.folds, cfg.seed);
  const auto rankings = load_rankings(cfg.rankings, cfg.folds, hash, table.num_features());

  EvalOptions opts = cfg.eval;
  opts.threads = cfg.threads;
  const CvReport report = evaluate_ranking(table, plan, rankings, opts);

  Json j = to_json(report);
  j["config_hash"] = hash;
  j["selector"] = to_json(rankings.front().config);
  write_run_json(dir, cfg);
  write_file(dir / "cv_report.json", dump(j));
  write_file(dir / "cv_report.csv", to_csv(report));
  print_cv(out, report);
}

void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  if (cfg.scores.empty()) throw InvalidArgument("--scores is required");
  const auto records = read_csv_records(read_file(cfg.scores));
  if (records.empty()) throw DataError("score CSV has no header row");

  const auto& header = records.front();
  std::string first = header.empty() ? std::string{} : header.front();
  std::transform(first.begin(), first.end(), first.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::size_t skip = first == "dataset" ? 1 : 0;
  if (header.size() < skip + 2)
    throw InvalidArgument("score CSV needs at least 2 algorithm columns, got " +
                          std::to_string(header.size() - skip));
  const std::vector<std::string> names(header.begin() + static_cast<std::ptrdiff_t>(skip),
                                       header.end());
  const std::size_t s = names.size();

  std::vector<std::vector<std::optional<double>>> scores;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size())
      throw ParseError(r, std::min(rec.size(), header.size()),
                       "expected " + std::to_string(header.size()) + " fields");
    std::vector<std::optional<double>> row(s);
    for (std::size_t c = 0; c < s; ++c) {
      const std::string& cell = rec[c + skip];
      if (cell.empty()) continue;
      double v = 0.0;
      if (!parse_finite(cell, v)) throw ParseError(r, c + skip, "not a finite number: '" + cell + "'");
      row[c] = v;
    }
    scores.push_back(std::move(row));
  }

  const fs::path dir = prepare_out(cfg);
  const auto ranks = rank_algorithms(scores, !cfg.lower_is_better, names);
  const std::optional<double> q = cfg.q_alpha ? cfg.q_alpha : nemenyi_q_alpha_05(s);
  const FriedmanResult result = friedman(ranks, q);

  write_run_json(dir, cfg);
  write_file(dir / "friedman.json", dump(to_json(result, names)));

  out << "datasets: " << scores.size() << "\n";
  out << "algorithms: " << s << "\n";
  out << "algorithm,avg_rank\n";
  for (std::size_t j = 0; j < s; ++j) out << names[j] << "," << fixed4(result.avg_ranks[j]) << "\n";
  out << "chi_sq: " << fixed4(result.chi_sq) << "\n";
  out << "f_stat: " << fixed4(result.f_stat) << "\n";
  out << "dof: " << result.dof1 << "," << result.dof2 << "\n";
  if (result.cd) {
    out << "q_alpha: " << fixed4(*result.q_alpha) << "\n";
    out << "cd: " << fixed4(*result.cd) << "\n";
    for (const auto& [a, b] : significant_pairs(result.avg_ranks, *result.cd))
      out << "significant: " << names[a] << " vs " << names[b] << "\n";
  } else {
    out << "cd: unavailable (no q_alpha for s=" << s << ")\n";
  }
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  validate_eval_options(cfg.eval);
  if (cfg.measures.empty() || cfg.frameworks.empty() || cfg.sops.empty() ||
      cfg.strategies.empty())
    throw InvalidArgument("sweep ranges must be non-empty");
  const DataTable table = load_csv(cfg.data, LabelColumn::parse(cfg.label));

  std::vector<SelectorConfig> grid;
  for (MeasureKind measure : cfg.measures)
    for (Framework framework : cfg.frameworks)
      for (std::size_t sop : cfg.sops)
        for (MarginStrategy strategy : cfg.strategies) {
          SelectorConfig sc = cfg.selector;
          sc.measure = measure;
          sc.framework = framework;
          sc.sop = sop;
          sc.strategy = strategy;
          if (sc.stop_at_constraint && measure != MeasureKind::FD) sc.stop_at_constraint.reset();
          sc.validate(table.num_features());
          grid.push_back(sc);
        }
  const fs::path dir = prepare_out(cfg);

  out << "seed: " << cfg.seed << "\n";
  const FoldPlan plan = stratified_kfold(table, cfg.folds, cfg.seed);
  EvalOptions opts = cfg.eval;
  opts.threads = cfg.threads;

  std::string rows = "measure,framework,sop,strategy,fold,cut,features,accuracy\n";
  std::string summary = "measure,framework,sop,strategy,grand_mean\n";
  out << "measure,framework,sop,strategy,grand_mean\n";
  for (const SelectorConfig& sc : grid) {
    const auto rankings = rank_all_folds(table, plan, sc, cfg.threads);
    const CvReport report = evaluate_ranking(table, plan, rankings, opts);
    const std::string key = std::string(to_string(sc.measure)) + "," +
                            std::string(to_string(sc.framework)) + "," + std::to_string(sc.sop) +
                            "," + std::string(to_string(sc.strategy));
    for (std::size_t f = 0; f < plan.k; ++f)
      for (std::size_t c = 0; c < report.cuts.size(); ++c)
        rows += key + "," + std::to_string(f) + "," + format_double(report.cuts[c]) + "," +
                std::to_string(report.cut_sizes[c]) + "," +
                format_double(report.per_fold_accuracy[f][c]) + "\n";
    summary += key + "," + format_double(report.grand_mean) + "\n";
    out << key << "," << fixed4(report.grand_mean) << "\n";
  }

  write_run_json(dir, cfg);
  write_file(dir / "sweep.csv", rows);
  write_file(dir / "sweep_summary.csv", summary);
}

namespace {

void dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "rank") return cmd_rank(cfg, out);
  if (cfg.command == "eval") return cmd_eval(cfg, out);
  if (cfg.command == "compare") return cmd_compare(cfg, out);
  if (cfg.command == "sweep") return cmd_sweep(cfg, out);
  throw InvalidArgument("unknown command '" + cfg.command + "'");
}

// Enum-valued flags are parsed after CLI11 so bad names map to exit code 2
// through InvalidArgument.
struct RawFlags {
  std::string framework = "mafrfs";
  std::string measure = "fd";
  std::string strategy = "global";
  std::string label_relation = "fuzzy";
  std::string empty_wbmr = "zero";
  std::string pool_context = "with-pool";
  std::string cut_rounding = "round";
  std::string threads;
  std::size_t sop = 3;
  std::size_t k = 0;
  double stop_at_constraint = 0.0;
  double q_alpha = 0.0;
  std::vector<std::string> measures{"fd"};
  std::vector<std::string> frameworks{"mafrfs"};
  std::vector<std::string> strategies{"global", "local"};
  std::string replay_path;
};

void add_data_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--data", cfg.data, "Dataset CSV")->required();
  sub->add_option("--label", cfg.label, "Label column name, or 'last'")->capture_default_str();
  sub->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Fold-plan seed")->capture_default_str();
}

void add_selector_flags(CLI::App* sub, RawFlags& raw, bool single) {
  if (single) {
    sub->add_option("--framework", raw.framework, "frfs | mafrfs")->capture_default_str();
    sub->add_option("--measure", raw.measure, "fd | fe | fje | fce | fmi")->capture_default_str();
    sub->add_option("--sop", raw.sop, "Candidate pool size")->capture_default_str();
    sub->add_option("--strategy", raw.strategy, "global | local")->capture_default_str();
    sub->add_option("--top-k", raw.k, "Rank only the first k features");
  }
  sub->add_option("--label-relation", raw.label_relation, "fuzzy | crisp")->capture_default_str();
  sub->add_option("--empty-wbmr", raw.empty_wbmr, "zero | skip-first")->capture_default_str();
  sub->add_option("--pool-context", raw.pool_context, "with-pool | without-pool")
      ->capture_default_str();
  sub->add_option("--stop-at-constraint", raw.stop_at_constraint,
                  "FD only: stop once FD(F') >= threshold * FD(F)");
}

void add_eval_flags(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
  sub->add_option("--cuts", cfg.eval.cuts, "Top-% cuts")->delimiter(',')->capture_default_str();
  sub->add_option("--neighbors,-K", cfg.eval.neighbors, "KNN neighbours")->capture_default_str();
  sub->add_option("--cut-rounding", raw.cut_rounding, "round | ceil | floor")
      ->capture_default_str();
}

void add_run_flags(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
  sub->add_option("--out", cfg.out, "Output directory")->required();
  sub->add_option("--threads", raw.threads, "Worker threads (default: $MAFRFS_THREADS or 1)");
}

void resolve_selector(CLI::App* sub, RunConfig& cfg, const RawFlags& raw) {
  SelectorConfig& sc = cfg.selector;
  if (sub->get_option_no_throw("--framework") != nullptr) {
    sc.framework = parse_framework(raw.framework);
    sc.measure = parse_measure(raw.measure);
    sc.sop = raw.sop;
    sc.strategy = parse_strategy(raw.strategy);
    if (sub->count("--top-k") > 0) sc.k = raw.k;
  }
  sc.measure_settings.label_relation = parse_label_relation(raw.label_relation);
  sc.empty_wbmr = parse_empty_wbmr(raw.empty_wbmr);
  sc.pool_context = parse_pool_context(raw.pool_context);
  if (sub->count("--stop-at-constraint") > 0) sc.stop_at_constraint = raw.stop_at_constraint;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Margin-aware fuzzy rough feature selection", "mafrfs"};
  app.set_version_flag("--version", MAFRFS_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  RawFlags raw;
  std::vector<std::string> sops_text{"2", "3", "4"};

  auto* rank = app.add_subcommand("rank", "Rank features on every training fold");
  add_data_flags(rank, cfg);
  add_selector_flags(rank, raw, true);
  add_run_flags(rank, cfg, raw);

  auto* eval = app.add_subcommand("eval", "Cross-validate KNN on top-% cuts of saved rankings");
  add_data_flags(eval, cfg);
  eval->add_option("--rankings", cfg.rankings, "Directory written by rank")->required();
  add_eval_flags(eval, cfg, raw);
  add_run_flags(eval, cfg, raw);

  auto* compare = app.add_subcommand("compare", "Friedman test and Nemenyi critical difference");
  compare->add_option("--scores", cfg.scores, "CSV of datasets x algorithms")->required();
  compare->add_option("--q-alpha", raw.q_alpha, "Nemenyi critical value (default: alpha 0.05)");
  compare->add_flag("--lower-is-better", cfg.lower_is_better, "Smaller scores rank first");
  compare->add_option("--out", cfg.out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Grid of rank + eval runs");
  add_data_flags(sweep, cfg);
  sweep->add_option("--measures", raw.measures)->delimiter(',')->capture_default_str();
  sweep->add_option("--frameworks", raw.frameworks)->delimiter(',')->capture_default_str();
  sweep->add_option("--sops", sops_text)->delimiter(',')->capture_default_str();
  sweep->add_option("--strategies", raw.strategies)->delimiter(',')->capture_default_str();
  add_selector_flags(sweep, raw, false);
  add_eval_flags(sweep, cfg, raw);
  add_run_flags(sweep, cfg, raw);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a run.json");
  replay->add_option("run_json", raw.replay_path, "Path to run.json")->required();
  add_run_flags(replay, cfg, raw);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << MAFRFS_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    cfg.threads = resolve_threads(raw.threads);
    if (replay->parsed()) {
      const Json j = Json::parse(read_file(raw.replay_path));
      RunConfig replayed = run_config_from_json(j.at("config"));
      replayed.out = cfg.out;
      replayed.threads = cfg.threads;
      dispatch(replayed, out);
      return kExitOk;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub == rank || sub == sweep) resolve_selector(sub, cfg, raw);
    if (sub == eval || sub == sweep) cfg.eval.rounding = parse_cut_rounding(raw.cut_rounding);
    if (sub == compare && compare->count("--q-alpha") > 0) cfg.q_alpha = raw.q_alpha;
    if (sub == sweep) {
      for (const auto& s : raw.measures) cfg.measures.push_back(parse_measure(s));
      for (const auto& s : raw.frameworks) cfg.frameworks.push_back(parse_framework(s));
      for (const auto& s : raw.strategies) cfg.strategies.push_back(parse_strategy(s));
      for (const auto& s : sops_text) {
        std::size_t used = 0;
        std::size_t v = 0;
        try {
          v = std::stoul(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size() || s.front() == '-')
          throw InvalidArgument("--sops entries must be non-negative integers, got '" + s + "'");
        cfg.sops.push_back(v);
      }
    }
    dispatch(cfg, out);
    return kExitOk;
  } catch (const std::exception& e) {
    report_error(err, error_kind(e), e.what());
    return exit_code_for(e);
  }
}

}  // namespace mafrfs
