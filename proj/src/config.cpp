#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "exptract/runner.hpp"

namespace exptract {

namespace {

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void only_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) reject(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) reject("unknown key '" + key + "' in " + where);
  }
}

double get_real(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) reject(where + " must be a number");
  return j.get<double>();
}

std::uint64_t get_count(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
  }
  reject(where + " must be a nonnegative integer");
}

// Explicit list or {kind: double-exponential, base, count}.
std::vector<double> e_grid_from(const nlohmann::json& j, const std::string& where) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) grid.push_back(get_real(j[i], where + "[" + std::to_string(i) + "]"));
  } else if (j.is_object()) {
    only_keys(j, where, {"kind", "base", "count"});
    if (j.value("kind", "") != "double-exponential") reject(where + ".kind must be 'double-exponential'");
    if (!j.contains("base") || !j.contains("count")) reject(where + " needs base and count");
    const double base = get_real(j["base"], where + ".base");
    if (!(base > 1.0)) reject(where + ".base must exceed 1");
    grid = double_exponential_grid(base, get_count(j["count"], where + ".count"));
  } else {
    reject(where + " must be a list or a generator object");
  }
  return grid;
}

Notion notion_from(const nlohmann::json& j) {
  if (j.is_string()) return Notion::parse(j.get<std::string>());
  only_keys(j, "notion", {"kind", "s", "t"});
  if (!j.contains("kind") || !j["kind"].is_string()) reject("notion.kind must be a string");
  return Notion::parse(j["kind"].get<std::string>(), get_real(j.value("s", nlohmann::json(1.0)), "notion.s"),
                       get_real(j.value("t", nlohmann::json(1.0)), "notion.t"));
}

nlohmann::json resolve_files(nlohmann::json desc, const std::string& base_dir) {
  if (desc.is_object() && desc.contains("file") && desc["file"].is_string()) {
    std::filesystem::path p = desc["file"].get<std::string>();
    if (p.is_relative()) desc["file"] = (std::filesystem::path(base_dir) / p).string();
  }
  return desc;
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  reject("format must be csv or json, got '" + s + "'");
}

EigenSeq RunConfig::lambda() const {
  if (lambda_desc.is_null()) reject("config has no lambda descriptor");
  return EigenSeq::from_json(lambda_desc);
}

WeightSeq RunConfig::gamma() const {
  if (gamma_desc.is_null()) reject("config has no gamma descriptor");
  return WeightSeq::from_json(gamma_desc);
}

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  only_keys(j, "config",
            {"schema", "lambda", "gamma", "queries", "notion", "notions", "limits", "output", "seed", "threads", "audit"});
  RunConfig cfg;
  if (!j.contains("schema")) reject("config needs a schema field");
  cfg.schema = static_cast<int>(get_count(j["schema"], "schema"));
  if (cfg.schema != kConfigSchema) reject("unsupported schema " + std::to_string(cfg.schema));

  if (j.contains("lambda")) cfg.lambda_desc = resolve_files(j["lambda"], base_dir);
  if (j.contains("gamma")) cfg.gamma_desc = resolve_files(j["gamma"], base_dir);

  if (j.contains("queries")) {
    const auto& q = j["queries"];
    only_keys(q, "queries", {"E", "log10_inv_eps", "d"});
    if (q.contains("E")) cfg.e_grid = e_grid_from(q["E"], "queries.E");
    if (q.contains("log10_inv_eps")) {
      for (double v : e_grid_from(q["log10_inv_eps"], "queries.log10_inv_eps")) cfg.e_grid.push_back(v * std::log(10.0));
    }
    if (cfg.e_grid.empty()) reject("queries needs a non-empty E grid");
    for (double E : cfg.e_grid) {
      if (!(E > 0.0) || !std::isfinite(E)) reject("E values must be positive and finite");
    }
    if (!q.contains("d") || !q["d"].is_array() || q["d"].empty()) reject("queries.d must be a non-empty list");
    for (const auto& d : q["d"]) {
      const std::uint64_t v = get_count(d, "queries.d");
      if (v < 1) reject("d values must be >= 1");
      cfg.d_list.push_back(v);
    }
  }

  try {
    if (j.contains("notion")) cfg.notions.push_back(notion_from(j["notion"]));
    if (j.contains("notions")) {
      if (!j["notions"].is_array()) reject("notions must be a list");
      for (const auto& n : j["notions"]) cfg.notions.push_back(notion_from(n));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    reject(e.what());
  }

  if (j.contains("limits")) {
    const auto& l = j["limits"];
    only_keys(l, "limits", {"node_budget", "search_cap", "top_k", "e_grid", "j_grid", "net_size", "promote_numeric"});
    if (l.contains("node_budget")) cfg.node_budget = get_count(l["node_budget"], "limits.node_budget");
    if (l.contains("search_cap")) cfg.search_cap = get_count(l["search_cap"], "limits.search_cap");
    if (l.contains("top_k")) cfg.top_k = get_count(l["top_k"], "limits.top_k");
    if (cfg.node_budget < 1 || cfg.search_cap < 2 || cfg.top_k < 1) reject("limits must be positive (search_cap >= 2)");
    cfg.probe.search_cap = cfg.search_cap;
    if (l.contains("e_grid")) cfg.probe.e_grid = e_grid_from(l["e_grid"], "limits.e_grid");
    if (l.contains("j_grid")) {
      cfg.probe.j_grid.clear();
      for (const auto& v : l["j_grid"]) cfg.probe.j_grid.push_back(get_count(v, "limits.j_grid"));
    }
    if (l.contains("net_size")) cfg.probe.net_size = get_count(l["net_size"], "limits.net_size");
    if (l.contains("promote_numeric")) cfg.probe.promote_numeric = l["promote_numeric"].get<bool>();
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    only_keys(o, "output", {"format", "path"});
    if (o.contains("format")) cfg.format = parse_format(o["format"].get<std::string>());
    if (o.contains("path")) cfg.out_path = o["path"].get<std::string>();
  }
  if (j.contains("seed")) cfg.seed = get_count(j["seed"], "seed");
  if (j.contains("threads")) {
    cfg.threads = static_cast<unsigned>(get_count(j["threads"], "threads"));
    if (cfg.threads < 1) reject("threads must be >= 1");
  }

  if (j.contains("audit")) {
    const auto& a = j["audit"];
    only_keys(a, "audit",
              {"suites", "oracle_instances", "power_sum_draws", "golden", "summability_families", "c_list", "brute_force"});
    if (a.contains("suites")) {
      cfg.audit.suites.clear();
      for (const auto& s : a["suites"]) {
        const std::string name = s.get<std::string>();
        if (name != "oracle" && name != "sandwich" && name != "summability" && name != "power_sum" && name != "brute_force") {
          reject("unknown audit suite '" + name + "'");
        }
        cfg.audit.suites.push_back(name);
      }
    }
    if (a.contains("oracle_instances")) cfg.audit.oracle_instances = get_count(a["oracle_instances"], "audit.oracle_instances");
    if (a.contains("power_sum_draws")) cfg.audit.power_sum_draws = get_count(a["power_sum_draws"], "audit.power_sum_draws");
    if (a.contains("golden")) cfg.audit.golden = a["golden"].get<bool>();
    if (a.contains("summability_families")) {
      for (const auto& f : a["summability_families"]) cfg.audit.summability_families.push_back(resolve_files(f, base_dir));
    }
    if (a.contains("c_list")) {
      cfg.audit.c_list.clear();
      for (const auto& c : a["c_list"]) {
        const double v = get_real(c, "audit.c_list");
        if (!(v > 0.0)) reject("audit.c_list entries must be positive");
        cfg.audit.c_list.push_back(v);
      }
    }
    if (a.contains("brute_force")) {
      for (const auto& b : a["brute_force"]) {
        only_keys(b, "audit.brute_force entry", {"E", "d", "box"});
        const double E = get_real(b.at("E"), "audit.brute_force.E");
        const std::uint64_t d = get_count(b.at("d"), "audit.brute_force.d");
        const std::uint64_t box = get_count(b.at("box"), "audit.brute_force.box");
        if (!(E > 0.0) || d < 1 || box < 1) reject("audit.brute_force entries need E > 0, d >= 1, box >= 1");
        cfg.audit.brute_force.push_back({E, d, box});
      }
    }
  }
  if (cfg.audit.summability_families.empty()) {
    cfg.audit.summability_families = {{{"family", "PowerLaw"}, {"a", 1.0}},
                                      {{"family", "PowerLaw"}, {"a", 2.0}},
                                      {{"family", "LogPower"}, {"beta", 2.0}},
                                      {{"family", "ExpPower"}, {"alpha", 1.0}, {"beta", 1.0}}};
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) reject("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    reject("config '" + path + "' is not valid JSON: " + e.what());
  }
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(j, parent.empty() ? "." : parent.string());
}

}  // namespace exptract
