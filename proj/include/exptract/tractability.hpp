#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "exptract/complexity.hpp"
#include "exptract/sequence.hpp"

namespace exptract {

// Exponential tractability notions. ExpWt is ExpStWt with s = t = 1.
struct Notion {
  enum class Kind { ExpSpt, ExpPt, ExpQpt, ExpWt, ExpStWt, ExpUwt };
  Kind kind = Kind::ExpSpt;
  double s = 1.0;
  double t = 1.0;

  static Notion spt() { return {Kind::ExpSpt}; }
  static Notion pt() { return {Kind::ExpPt}; }
  static Notion qpt() { return {Kind::ExpQpt}; }
  static Notion wt() { return {Kind::ExpWt}; }
  static Notion st_wt(double s, double t) { return {Kind::ExpStWt, s, t}; }

  std::string name() const;
  static Notion parse(const std::string& kind, double s = 1.0, double t = 1.0);
};

enum class Trend { Increasing, Decreasing, Flat, Oscillating };
const char* to_string(Trend t) noexcept;

// Trend of a sequence of values, with relative tolerance for equality.
Trend classify_trend(const std::vector<double>& values, double rel_tol = 1e-12);

struct Probe {
  double x;      // probe parameter (E, j, or a log-scale for nets)
  double ratio;
};

// Finite-probe surrogate for a limsup.
struct LimitEstimate {
  std::vector<Probe> probes;  // sorted by x
  double tail_sup = 0.0;      // sup over the last half of the probes
  Trend trend = Trend::Flat;
  std::vector<std::pair<double, std::string>> skipped;

  nlohmann::json to_json() const;
};

LimitEstimate make_estimate(std::vector<Probe> probes, std::vector<std::pair<double, std::string>> skipped = {});

// d(eps) log j(eps) / log log(1/eps) on each E of the grid.
LimitEstimate b_spt_estimate(const EigenSeq& lambda, const WeightSeq& gamma, const std::vector<double>& e_grid,
                             std::uint64_t search_cap = kDefaultSearchCap);

// Same, divided by log d(eps); probes with d(eps) < 2 are skipped.
LimitEstimate b_qpt_estimate(const EigenSeq& lambda, const WeightSeq& gamma, const std::vector<double>& e_grid,
                             std::uint64_t search_cap = kDefaultSearchCap);

enum class Mode { Analytic, Numeric };
const char* to_string(Mode m) noexcept;

struct DivergenceReport {
  enum class Kind { Diverges, Bounded, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double limit = 0.0;  // for Bounded
  Mode mode = Mode::Numeric;
  LimitEstimate evidence;  // r_j = L(j)^s / log j on the j grid

  nlohmann::json to_json() const;
};

// Behaviour of L(j)^s / log j as j -> infinity. Only analytic metadata can
// produce Diverges or Bounded; numeric evaluation is evidence only.
DivergenceReport divergence_check(const Sequence& seq, double s, const std::vector<std::uint64_t>& j_grid);

struct SummabilityResult {
  double partial = 0.0;                // sum_{j <= J} x_j^c
  std::optional<double> tail_bound;    // bound on sum_{j > J}; nullopt if unknown
  std::uint64_t J = 0;
};

// Truncated M_c = sum_j x_j^c with a family tail bound. Throws DivergentTail
// when the family certifies divergence.
SummabilityResult summability(const Sequence& seq, double c, std::uint64_t J);

// Doubles J until tail_bound < rel_tol * partial, or J_max is reached.
SummabilityResult summability_adaptive(const Sequence& seq, double c, double rel_tol = 1e-9,
                                       std::uint64_t J_max = std::uint64_t{1} << 22);

struct Condwt3Result {
  double sup = 0.0;
  std::uint64_t argmax = 1;
  bool growing = false;         // the expression still increases at dmax
  double m_star = 0.0;          // sum_{j >= 2} lambda_j^c (upper bound when a tail is added)
  bool tail_known = true;
};

// sup over d <= dmax of sum_{k<=d} log(1 + gamma_k^c M*) - c d^t,
// M* = sum_{j >= 2} lambda_j^c.
Condwt3Result condwt3_sup(const EigenSeq& lambda, const WeightSeq& gamma, double c, double t, std::uint64_t dmax);

struct Triple {
  std::uint64_t d;
  std::uint64_t k;
  std::uint64_t j;
};

// ((log 1/gamma_k)^s + (log 1/lambda_j)^s) / (d^(1-s) log j) on each triple,
// keyed by log(d + gamma_k^-d lambda_j^-d); minimum taken per scale.
LimitEstimate condition_111_check(const EigenSeq& lambda, const WeightSeq& gamma, double s,
                                  const std::vector<Triple>& triples);

// Structured nets along which the item-11 ratio is probed.
enum class Net111 { GrowDimension, GrowIndex, Diagonal };
std::vector<Triple> net_111(Net111 kind, std::size_t size);

// (d^t + (sum_j log 1/gamma_j)^s + (sum_j log 1/lambda_{k_j})^s) / sum_j log k_j
double lemma4_ratio(const EigenSeq& lambda, const WeightSeq& gamma, double s, double t, std::uint64_t d,
                    const std::vector<std::uint64_t>& k_list);

// s(t-1)/(t-s), the exponent governing s < 1 < t.
double item10_eta(double s, double t);

struct ProbePolicy {
  std::vector<double> e_grid;             // default: 10^(2^i), i = 1..8
  std::vector<std::uint64_t> j_grid;      // default: 10^i, i = 1..18
  std::uint64_t search_cap = kDefaultSearchCap;
  std::size_t net_size = 24;
  bool promote_numeric = false;           // let an increasing numeric trend count as divergence

  static ProbePolicy defaults();
};

// Double-exponential grid base^(2^i), i = 1..count.
std::vector<double> double_exponential_grid(double base, std::size_t count);

struct Diagnostic {
  std::string name;
  nlohmann::json detail;
};

struct Verdict {
  enum class Status { Holds, Fails, Inconclusive };

  Notion notion;
  Status status = Status::Inconclusive;
  std::optional<double> exponent;  // p* for EXP-SPT/PT, t* for EXP-QPT
  Mode mode = Mode::Numeric;
  std::string rule;                // which characterization was applied
  std::vector<Diagnostic> evidence;

  const Diagnostic* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

const char* to_string(Verdict::Status s) noexcept;

// Analytic value of the EXP-SPT / EXP-QPT limsup constants when both
// sequences carry metadata; nullopt otherwise.
std::optional<double> analytic_b_spt(const EigenSeq& lambda, const WeightSeq& gamma);
std::optional<double> analytic_b_qpt(const EigenSeq& lambda, const WeightSeq& gamma);

Verdict classify(const EigenSeq& lambda, const WeightSeq& gamma, const Notion& notion,
                 const ProbePolicy& policy = ProbePolicy::defaults());

struct FitResult {
  double p_hat = 0.0;
  double c_hat = 0.0;
  double residual = 0.0;
  bool degenerate = false;
};

// Least squares of log(count) on log(1 + E): count ~ C (1 + E)^p.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace exptract
