#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "remon/kkt.hpp"
#include "remon/model.hpp"
#include "remon/policy.hpp"

namespace remon {

using Json = nlohmann::ordered_json;

/// Value rounded to 12 significant digits.
double round12(double v);
/// "%.12g" rendering used for every CSV cell.
std::string format12(double v);

/// Accepts "0x..." hex, plain decimal strings, or JSON integers.
std::uint64_t parse_seed(const Json& node);
std::uint64_t parse_seed(const std::string& text);
std::string format_seed(std::uint64_t seed);

/// Reads {n_sources, k_select, horizon, rate_budget, sources: [{mu, lambda}],
/// seed?} and validates it.
SystemConfig config_from_json(const Json& doc);
Json config_to_json(const SystemConfig& cfg);
SystemConfig load_config(const std::filesystem::path& path);

/// {"kind": "three_stage", "switch_times": [...], "persistent_states": ["01", ...]}
Json three_stage_to_json(const ThreeStageSpec& spec);

/// Accepts kind "three_stage", "always", "never" or "table"; a table lists
/// per source {"update_01": [...], "update_10": [...]} with T booleans each.
TabularPolicy policy_from_json(const SystemConfig& cfg, const Json& doc);
Json table_policy_to_json(const TabularPolicy& policy);
TabularPolicy load_policy(const SystemConfig& cfg, const std::filesystem::path& path);

Json kkt_solution_to_json(const KktSolution& sol);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace remon
