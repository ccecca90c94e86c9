#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mafrfs/dataset.hpp"
#include "mafrfs/eval.hpp"
#include "mafrfs/margins.hpp"
#include "mafrfs/select.hpp"

namespace mafrfs {

using Json = nlohmann::ordered_json;

Json to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const Json& j);

Json to_json(const MarginReport& report);
MarginReport margin_report_from_json(const Json& j);

Json to_json(const SelectorConfig& cfg);
SelectorConfig selector_config_from_json(const Json& j);

Json to_json(const RankingResult& result);
RankingResult ranking_from_json(const Json& j);

Json to_json(const CvReport& report);
// Long format: header "fold,cut,accuracy", one line per (fold, cut).
std::string to_csv(const CvReport& report);

Json to_json(const FriedmanResult& result, const std::vector<std::string>& names = {});

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace mafrfs
