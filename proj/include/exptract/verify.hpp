#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "exptract/complexity.hpp"
#include "exptract/sequence.hpp"

namespace exptract {

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::string lhs;
  std::string rhs;
  std::string note;
};

struct AuditReport {
  std::string instance;
  std::vector<AuditCheck> checks;

  bool passed() const noexcept;
  void add(std::string name, bool passed, std::string lhs, std::string rhs, std::string note = {});
  nlohmann::json to_json() const;
};

inline constexpr double kBruteForceGuard = 1e8;

// Count over {1..box}^d by full enumeration. Throws GuardExceeded when
// box^d > 1e8 and BoxTooSmall when some index above box could qualify.
BigCount brute_force_count(const EigenSeq& lambda, const WeightSeq& gamma, const Query& q, std::uint64_t box);

// count(E, d) <= j(E)^min(d, d(E)) <= count(2 d(E) E, d(E)), and
// count(E, d) == count(E, d(E)) once d >= d(E).
AuditReport check_lemma1(const EigenSeq& lambda, const WeightSeq& gamma, double E, std::uint64_t d,
                         std::uint64_t node_budget = kDefaultNodeBudget);

struct PowerSumSplit {
  double alpha = 1.0;
  double lower = 1.0;
  double upper = 1.0;
  bool within = true;  // lower <= alpha <= upper up to 1e-12 relative
};

// alpha with (sum a)^s = alpha * sum a^s, using 0^0 = 1.
PowerSumSplit power_sum_split(double s, const std::vector<double>& a);

// Summability of x_j^c for each c against the analytic divergence class.
AuditReport check_lemma2_family(const Sequence& seq, const std::vector<double>& c_list,
                                const std::vector<std::uint64_t>& j_grid);

// Random monotone tabulated instance: L(1) = 0, increments drawn so the
// budget cuts somewhere inside the table.
struct OracleInstance {
  EigenSeq lambda;
  WeightSeq gamma;
  Query query;
  std::uint64_t box;
};

// Deterministic across platforms for a given engine state.
OracleInstance random_oracle_instance(std::mt19937_64& rng);

// Compares info_complexity with brute_force_count on one instance.
AuditCheck oracle_check(const OracleInstance& inst, const std::string& name);

// Reference instances with hand-checkable closed forms, each with its own
// E grid (kept small enough for exact counting) and dimension list.
struct GoldenFamily {
  std::string name;
  EigenSeq lambda;
  WeightSeq gamma;
  std::vector<double> e_grid;
  std::vector<std::uint64_t> d_list;
};

std::vector<GoldenFamily> golden_families();

}  // namespace exptract
