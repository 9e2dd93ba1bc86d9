#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "exptract/complexity.hpp"
#include "exptract/sequence.hpp"
#include "exptract/tractability.hpp"
#include "exptract/verify.hpp"

namespace exptract {

inline constexpr int kConfigSchema = 1;

enum class Format { Csv, Json };

struct AuditSettings {
  std::vector<std::string> suites{"oracle", "sandwich", "summability", "power_sum"};
  std::size_t oracle_instances = 200;
  std::size_t power_sum_draws = 1000;
  bool golden = true;               // sandwich checks on the built-in families
  std::vector<nlohmann::json> summability_families;
  std::vector<double> c_list{2.0, 1.0, 0.5, 0.1};
  // Explicit brute-force comparisons on the configured sequences.
  struct BruteForce {
    double E;
    std::uint64_t d;
    std::uint64_t box;
  };
  std::vector<BruteForce> brute_force;
};

struct RunConfig {
  int schema = kConfigSchema;
  nlohmann::json lambda_desc;
  nlohmann::json gamma_desc;
  std::vector<double> e_grid;
  std::vector<std::uint64_t> d_list;
  std::vector<Notion> notions;
  std::uint64_t node_budget = kDefaultNodeBudget;
  std::uint64_t search_cap = kDefaultSearchCap;
  std::uint64_t top_k = 10;
  ProbePolicy probe = ProbePolicy::defaults();
  Format format = Format::Csv;
  std::string out_path;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  AuditSettings audit;

  // Sequences are built on demand so a bad descriptor surfaces as a config error.
  EigenSeq lambda() const;
  WeightSeq gamma() const;
};

// Throws Error(ConfigError) with a diagnostic on any invalid field.
// Relative "file" paths in descriptors resolve against base_dir.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

Format parse_format(const std::string& s);

// Row-oriented result with typed cells. Reals print with 17 significant
// digits in CSV; counts are exact decimal strings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);
std::string format_real(double v);

struct RunOutcome {
  Table table;
  std::optional<nlohmann::json> document;  // structured output (verdicts); preferred for JSON
  int exit_code = 0;
};

RunOutcome run_count(const RunConfig& cfg);
RunOutcome run_sweep(const RunConfig& cfg);
RunOutcome run_classify(const RunConfig& cfg);
RunOutcome run_topk(const RunConfig& cfg);
RunOutcome run_audit(const RunConfig& cfg);

void write_outcome(std::ostream& out, const RunOutcome& r, Format f);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAudit = 2;
inline constexpr int kExitBudget = 3;

int exit_code_for(ErrorCode code) noexcept;

}  // namespace exptract
