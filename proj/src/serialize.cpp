#include "mafrfs/serialize.hpp"

#include <charconv>
#include <cstdio>

#include "mafrfs/errors.hpp"

namespace mafrfs {

namespace {

template <typename T>
T get_or_throw(const Json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("JSON is missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("JSON key '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

Json to_json(const FoldPlan& plan) {
  return Json{{"k", plan.k}, {"seed", plan.seed}, {"assignments", plan.assignments}};
}

FoldPlan fold_plan_from_json(const Json& j) {
  FoldPlan plan;
  plan.k = get_or_throw<std::size_t>(j, "k");
  plan.seed = get_or_throw<std::uint64_t>(j, "seed");
  plan.assignments = get_or_throw<std::vector<std::size_t>>(j, "assignments");
  for (std::size_t a : plan.assignments)
    if (a >= plan.k) throw DataError("fold assignment out of range");
  return plan;
}

Json to_json(const MarginReport& r) {
  return Json{{"theta", r.theta},   {"lambda_g", r.lambda_g}, {"delta_l", r.delta_l},
              {"wbmr_g", r.wbmr_g}, {"wbmr_l", r.wbmr_l},     {"degenerate", r.degenerate}};
}

MarginReport margin_report_from_json(const Json& j) {
  MarginReport r;
  r.theta = get_or_throw<double>(j, "theta");
  r.lambda_g = get_or_throw<double>(j, "lambda_g");
  r.delta_l = get_or_throw<double>(j, "delta_l");
  r.wbmr_g = get_or_throw<double>(j, "wbmr_g");
  r.wbmr_l = get_or_throw<double>(j, "wbmr_l");
  r.degenerate = get_or_throw<bool>(j, "degenerate");
  return r;
}

Json to_json(const SelectorConfig& cfg) {
  Json j{{"framework", to_string(cfg.framework)},
         {"measure", to_string(cfg.measure)},
         {"sop", cfg.sop},
         {"strategy", to_string(cfg.strategy)},
         {"k", nullptr},
         {"pool_context", to_string(cfg.pool_context)},
         {"empty_wbmr", to_string(cfg.empty_wbmr)},
         {"label_relation", to_string(cfg.measure_settings.label_relation)},
         {"log_base", cfg.measure_settings.log_base},
         {"stop_at_constraint", nullptr}};
  if (cfg.k) j["k"] = *cfg.k;
  if (cfg.stop_at_constraint) j["stop_at_constraint"] = *cfg.stop_at_constraint;
  return j;
}

SelectorConfig selector_config_from_json(const Json& j) {
  SelectorConfig cfg;
  cfg.framework = parse_framework(get_or_throw<std::string>(j, "framework"));
  cfg.measure = parse_measure(get_or_throw<std::string>(j, "measure"));
  cfg.sop = get_or_throw<std::size_t>(j, "sop");
  cfg.strategy = parse_strategy(get_or_throw<std::string>(j, "strategy"));
  if (j.contains("k") && !j.at("k").is_null()) cfg.k = j.at("k").get<std::size_t>();
  cfg.pool_context = parse_pool_context(get_or_throw<std::string>(j, "pool_context"));
  cfg.empty_wbmr = parse_empty_wbmr(get_or_throw<std::string>(j, "empty_wbmr"));
  cfg.measure_settings.label_relation =
      parse_label_relation(get_or_throw<std::string>(j, "label_relation"));
  cfg.measure_settings.log_base = get_or_throw<double>(j, "log_base");
  if (j.contains("stop_at_constraint") && !j.at("stop_at_constraint").is_null())
    cfg.stop_at_constraint = j.at("stop_at_constraint").get<double>();
  return cfg;
}

Json to_json(const RankingResult& r) {
  Json margin = Json::array();
  for (const auto& step : r.margin_trace) {
    Json reports = Json::array();
    for (const auto& rep : step.reports) reports.push_back(to_json(rep));
    margin.push_back(Json{{"deltas", step.deltas}, {"reports", reports}});
  }
  Json j{{"config", to_json(r.config)}, {"fold", nullptr}};
  if (r.fold_id) j["fold"] = *r.fold_id;
  j["order"] = r.order;
  j["fitness_trace"] = r.fitness_trace;
  j["value_trace"] = r.value_trace;
  j["margin_trace"] = margin;
  j["pool_trace"] = r.pool_trace;
  j["evaluations"] = Json{{"fitness", r.fitness_evaluations}, {"margin", r.margin_evaluations}};
  return j;
}

RankingResult ranking_from_json(const Json& j) {
  RankingResult r;
  r.config = selector_config_from_json(get_or_throw<Json>(j, "config"));
  if (j.contains("fold") && !j.at("fold").is_null()) r.fold_id = j.at("fold").get<std::size_t>();
  r.order = get_or_throw<std::vector<std::size_t>>(j, "order");
  r.fitness_trace = get_or_throw<std::vector<double>>(j, "fitness_trace");
  if (j.contains("value_trace")) r.value_trace = j.at("value_trace").get<std::vector<double>>();
  if (j.contains("margin_trace")) {
    for (const auto& step : j.at("margin_trace")) {
      MarginStep s;
      s.deltas = get_or_throw<std::vector<double>>(step, "deltas");
      for (const auto& rep : get_or_throw<Json>(step, "reports"))
        s.reports.push_back(margin_report_from_json(rep));
      r.margin_trace.push_back(std::move(s));
    }
  }
  if (j.contains("pool_trace"))
    r.pool_trace = j.at("pool_trace").get<std::vector<std::vector<std::size_t>>>();
  if (j.contains("evaluations")) {
    r.fitness_evaluations = j.at("evaluations").value("fitness", std::size_t{0});
    r.margin_evaluations = j.at("evaluations").value("margin", std::size_t{0});
  }
  return r;
}

Json to_json(const CvReport& report) {
  return Json{{"cuts", report.cuts},
              {"cut_sizes", report.cut_sizes},
              {"per_fold_accuracy", report.per_fold_accuracy},
              {"mean_per_cut", report.mean_per_cut},
              {"grand_mean", report.grand_mean}};
}

std::string to_csv(const CvReport& report) {
  std::string out = "fold,cut,accuracy\n";
  for (std::size_t f = 0; f < report.per_fold_accuracy.size(); ++f)
    for (std::size_t c = 0; c < report.cuts.size(); ++c)
      out += std::to_string(f) + "," + format_double(report.cuts[c]) + "," +
             format_double(report.per_fold_accuracy[f][c]) + "\n";
  return out;
}

Json to_json(const FriedmanResult& r, const std::vector<std::string>& names) {
  Json j{{"algorithms", names},
         {"avg_ranks", r.avg_ranks},
         {"chi_sq", r.chi_sq},
         {"f_stat", r.f_stat},
         {"dof", {r.dof1, r.dof2}},
         {"q_alpha", nullptr},
         {"cd", nullptr}};
  if (r.q_alpha) j["q_alpha"] = *r.q_alpha;
  if (r.cd) {
    j["cd"] = *r.cd;
    Json pairs = Json::array();
    for (const auto& [a, b] : significant_pairs(r.avg_ranks, *r.cd)) pairs.push_back({a, b});
    j["significant_pairs"] = pairs;
  }
  return j;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mafrfs
