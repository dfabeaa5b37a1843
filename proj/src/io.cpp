#include "remon/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace remon {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string format12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty seed");
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    value = std::stoull(hex ? text.substr(2) : text, &used, hex ? 16 : 10);
    if (used != text.size() - (hex ? 2 : 0)) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("seed '" + text + "' is not a decimal or 0x-prefixed hex integer");
  }
  return value;
}

std::uint64_t parse_seed(const Json& node) {
  if (node.is_string()) return parse_seed(node.get<std::string>());
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer() && node.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(node.get<std::int64_t>());
  }
  throw std::invalid_argument("seed must be a non-negative integer or hex string");
}

std::string format_seed(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

template <typename T>
T required(const Json& doc, const char* key, std::vector<std::string>& problems) {
  if (!doc.contains(key)) {
    problems.push_back(std::string("missing field '") + key + "'");
    return T{};
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    problems.push_back(std::string("field '") + key + "' has the wrong type");
    return T{};
  }
}

PairState parse_state(const Json& node) {
  const std::string s = node.get<std::string>();
  if (s == "01") return PairState::k01;
  if (s == "10") return PairState::k10;
  throw std::invalid_argument("persistent state must be \"01\" or \"10\", got '" + s + "'");
}

}  // namespace

SystemConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError({"config document must be an object"});
  std::vector<std::string> problems;
  SystemConfig cfg;
  cfg.n_sources = required<int>(doc, "n_sources", problems);
  cfg.k_select = required<int>(doc, "k_select", problems);
  cfg.horizon = required<int>(doc, "horizon", problems);
  cfg.rate_budget = required<double>(doc, "rate_budget", problems);
  if (!doc.contains("sources") || !doc.at("sources").is_array()) {
    problems.push_back("field 'sources' must be an array");
  } else {
    for (const auto& src : doc.at("sources")) {
      SourceParams p;
      if (!src.is_object()) {
        problems.push_back("each source must be an object with mu and lambda");
      } else {
        p.mu = required<double>(src, "mu", problems);
        p.lambda = required<double>(src, "lambda", problems);
      }
      cfg.sources.push_back(p);
    }
  }
  if (doc.contains("seed")) {
    try {
      cfg.seed = parse_seed(doc.at("seed"));
    } catch (const std::invalid_argument& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  return validate_config(cfg);
}

Json config_to_json(const SystemConfig& cfg) {
  Json doc;
  doc["n_sources"] = cfg.n_sources;
  doc["k_select"] = cfg.k_select;
  doc["horizon"] = cfg.horizon;
  doc["rate_budget"] = round12(cfg.rate_budget);
  Json sources = Json::array();
  for (const auto& p : cfg.sources) sources.push_back({{"mu", round12(p.mu)}, {"lambda", round12(p.lambda)}});
  doc["sources"] = sources;
  doc["seed"] = format_seed(cfg.seed);
  return doc;
}

SystemConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

Json three_stage_to_json(const ThreeStageSpec& spec) {
  Json states = Json::array();
  for (PairState s : spec.persistent_states) states.push_back(to_string(s));
  return Json{{"kind", "three_stage"}, {"switch_times", spec.switch_times}, {"persistent_states", states}};
}

TabularPolicy policy_from_json(const SystemConfig& cfg, const Json& doc) {
  const std::string kind = doc.value("kind", std::string{});
  if (kind == "always") return always_update_policy(cfg);
  if (kind == "never") return never_update_policy(cfg);
  if (kind == "three_stage") {
    ThreeStageSpec spec;
    spec.switch_times = doc.at("switch_times").get<std::vector<int>>();
    if (doc.contains("persistent_states")) {
      for (const auto& s : doc.at("persistent_states")) spec.persistent_states.push_back(parse_state(s));
    } else {
      spec = make_three_stage_spec(cfg, spec.switch_times);
    }
    return compile_three_stage(cfg, spec);
  }
  if (kind == "table") {
    const auto& sources = doc.at("sources");
    if (static_cast<int>(sources.size()) != cfg.n_sources) {
      throw std::invalid_argument("table policy must list one entry per source");
    }
    TabularPolicy policy(cfg.n_sources, cfg.horizon);
    for (int n = 1; n <= cfg.n_sources; ++n) {
      const auto& entry = sources.at(static_cast<std::size_t>(n - 1));
      const auto u01 = entry.at("update_01").get<std::vector<bool>>();
      const auto u10 = entry.at("update_10").get<std::vector<bool>>();
      if (static_cast<int>(u01.size()) != cfg.horizon || static_cast<int>(u10.size()) != cfg.horizon) {
        throw std::invalid_argument("table rows must have one entry per slot");
      }
      for (int t = 1; t <= cfg.horizon; ++t) {
        policy.source(n).set_update(t, PairState::k01, u01[static_cast<std::size_t>(t - 1)]);
        policy.source(n).set_update(t, PairState::k10, u10[static_cast<std::size_t>(t - 1)]);
      }
    }
    return policy;
  }
  throw std::invalid_argument("unknown policy kind '" + kind + "'");
}

Json table_policy_to_json(const TabularPolicy& policy) {
  Json sources = Json::array();
  for (int n = 1; n <= policy.n_sources(); ++n) {
    std::vector<bool> u01, u10;
    for (int t = 1; t <= policy.horizon(); ++t) {
      u01.push_back(policy.source(n).update(t, PairState::k01));
      u10.push_back(policy.source(n).update(t, PairState::k10));
    }
    sources.push_back({{"update_01", u01}, {"update_10", u10}});
  }
  return Json{{"kind", "table"}, {"sources", sources}};
}

TabularPolicy load_policy(const SystemConfig& cfg, const std::filesystem::path& path) {
  return policy_from_json(cfg, read_json_file(path));
}

Json kkt_solution_to_json(const KktSolution& sol) {
  auto rounded = [](const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(round12(x));
    return out;
  };
  Json doc;
  doc["rate"] = round12(sol.rate);
  doc["full_rate"] = round12(sol.full_rate);
  doc["theta"] = round12(sol.theta);
  doc["set_a"] = sol.set_a;
  doc["set_b"] = sol.set_b;
  doc["n_tilde"] = sol.n_tilde;
  doc["tau_of_m"] = rounded(sol.tau_of_m);
  doc["t_prime"] = round12(sol.t_prime);
  doc["switch_times"] = sol.switch_times;
  doc["breakpoints"] = rounded(sol.breakpoints);
  return doc;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace remon
