#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "exptract/ext_log_mag.hpp"

namespace exptract {

// Closed-form sequence families. Every family describes L(j) = log(1/x_j)
// for a non-increasing sequence x_1 >= x_2 >= ... in [0, 1].
namespace family {

// x_j given row by row; x_j = 0 past the last row.
struct Tabulated {
  std::vector<ExtLogMag> values;
};

// x_j = j^(-a)
struct PowerLaw {
  double a;
};

// x_j = exp(-alpha * j^beta)
struct ExpPower {
  double alpha;
  double beta;
};

// x_j = exp(-exp(alpha * j^beta))
struct DoubleExpPower {
  double alpha;
  double beta;
};

// x_j = exp(-exp(exp(alpha * j)))
struct TripleExp {
  double alpha;
};

// x_j = exp(-(log j)^beta), beta > 1
struct LogPower {
  double beta;
};

// x_j = prefix[j-1] for j <= prefix.size(), then j^(-log log j).
struct IterLog {
  std::vector<ExtLogMag> prefix;
};

// Weights only: x_k = 1.
struct ConstantOne {};

// Weights only: x_k = 1 / log(k + 2); tends to zero arbitrarily slowly.
struct InverseLog {};

// Weights only: x_k = prefix[k-1] for k < j_star, x_k = 0 for k >= j_star.
struct EventuallyZero {
  std::uint64_t j_star;
  std::vector<ExtLogMag> prefix;
};

}  // namespace family

using Family = std::variant<family::Tabulated, family::PowerLaw, family::ExpPower, family::DoubleExpPower,
                            family::TripleExp, family::LogPower, family::IterLog, family::ConstantOne,
                            family::InverseLog, family::EventuallyZero>;

std::string family_name(const Family& f);

// Limit of L(j)^s / log j as j -> infinity.
struct DivergenceClass {
  enum class Kind { Diverges, Bounded };
  Kind kind;
  double limit = 0.0;  // meaningful for Bounded

  static DivergenceClass diverges() { return {Kind::Diverges, 0.0}; }
  static DivergenceClass bounded(double limit) { return {Kind::Bounded, limit}; }
};

// Shared machinery for eigenvalue and weight sequences. Immutable after
// construction; evaluation is pure.
class Sequence {
 public:
  const Family& family() const noexcept { return family_; }
  bool normalized() const noexcept { return normalized_; }
  bool has_analytic() const noexcept { return analytic_; }

  // L(j) = log(1/x_j). Overflow saturates to +inf.
  ExtLogMag eval(std::uint64_t j) const;

  // Closed form x such that {j : L(j) < budget} = {1, ..., ceil(x) - 1}.
  // +inf when every index qualifies. nullopt without analytic metadata or
  // when the family has no closed form.
  std::optional<double> threshold_bound(double budget) const;

  // Class of L(j)^s / log j; nullopt without analytic metadata.
  std::optional<DivergenceClass> divergence_class(double s) const;

  // Whether x_j -> 0; nullopt without analytic metadata.
  std::optional<bool> tends_to_zero() const;

  nlohmann::json to_json() const;

 protected:
  Sequence(Family family, bool normalize);
  void check_monotone_prefix() const;

  Family family_;
  bool normalized_ = true;
  bool analytic_ = true;
};

// Eigenvalues lambda_j with lambda_1 = 1 and lambda_2 > 0.
class EigenSeq : public Sequence {
 public:
  explicit EigenSeq(Family family);

  // Tabulated values whose first entry need not be 0; shifted so L(1) = 0.
  static EigenSeq from_unnormalized(std::vector<ExtLogMag> values);

  // Default prefix table lambda_1 = 1, lambda_2 = 0.95.
  static EigenSeq iter_log();

  static EigenSeq from_json(const nlohmann::json& j);

  EigenSeq without_analytic() const;
};

// Product weights 1 >= gamma_1 >= gamma_2 >= ... >= 0.
class WeightSeq : public Sequence {
 public:
  explicit WeightSeq(Family family, bool normalize = true);

  static WeightSeq from_json(const nlohmann::json& j);

  WeightSeq without_analytic() const;
};

// Two-column text format: "index log_inv_value" per line, '#' comments,
// indices 1..n in order. Values are printed with 17 significant digits.
std::vector<ExtLogMag> read_table(std::istream& in);
std::vector<ExtLogMag> read_table_file(const std::string& path);
void write_table(std::ostream& out, const std::vector<ExtLogMag>& values);

}  // namespace exptract
