#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exptract/ext_log_mag.hpp"
#include "exptract/sequence.hpp"

namespace exptract {

using BigCount = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultSearchCap = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

// Error threshold E = log(1/eps) > 0 and dimension d >= 1.
struct Query {
  Query(double E, std::uint64_t d);

  double E;
  std::uint64_t d;

  // Log-domain budget 2E: a tuple qualifies iff its cost is strictly below it.
  double budget() const noexcept { return 2.0 * E; }
};

struct CountResult {
  BigCount count;
  std::uint64_t nodes_visited = 0;
  std::uint64_t truncated_dimension = 0;
};

// max{j : lambda_j > eps^2}, i.e. max{j : L(j) < 2E}. Always >= 1.
std::uint64_t j_of_eps(const EigenSeq& lambda, double E, std::uint64_t search_cap = kDefaultSearchCap);

// max{d : gamma_d > eps^2}; 0 when gamma_1 <= eps^2.
std::uint64_t d_of_eps(const WeightSeq& gamma, double E, std::uint64_t search_cap = kDefaultSearchCap);

// n(eps, S_{d,gamma}) = number of tuples (n_1..n_d) whose cost
// sum_{k : n_k >= 2} (G(k) + L(n_k)) is strictly below 2E.
CountResult info_complexity(const EigenSeq& lambda, const WeightSeq& gamma, const Query& q,
                            std::uint64_t node_budget = kDefaultNodeBudget,
                            std::uint64_t search_cap = kDefaultSearchCap);

// Nontrivial coordinates (k, n_k) of a tuple, n_k >= 2, sorted by k.
// Coordinates not listed are 1.
using SparseTuple = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

// Cost of a tuple, summed in coordinate order. This is the single
// definition shared by every counting path so knife-edge comparisons agree.
double tuple_cost(const EigenSeq& lambda, const WeightSeq& gamma, const SparseTuple& t);

// Dense lexicographic order on the full index tuple.
bool lex_less(const SparseTuple& a, const SparseTuple& b) noexcept;

struct TensorEigenvalue {
  ExtLogMag cost;      // log(1 / eigenvalue)
  SparseTuple tuple;   // empty with infinite cost for zero eigenvalues padding the list
};

// The K largest eigenvalues (smallest costs), non-decreasing in cost. A tie
// class straddling position K is emitted whole, so the result may hold more
// than K entries. Ties are ordered lexicographically on the index tuple.
// Zero eigenvalues (cost +inf) pad the list when fewer than K are positive.
std::vector<TensorEigenvalue> top_eigenpairs(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d,
                                             std::uint64_t K);

std::vector<ExtLogMag> top_eigenvalues(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d,
                                       std::uint64_t K);

// log(1 / e(n)) where e(n) is the n-th minimal worst-case error.
ExtLogMag nth_minimal_error(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d, std::uint64_t n);

namespace detail {

// Largest x in [lo, hi] with pred(x), given pred(lo) holds and pred is
// monotone (true then false). Galloping, then bisection.
template <class Pred>
std::uint64_t last_true(Pred&& pred, std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t good = lo;
  std::uint64_t step = 1;
  std::uint64_t bad = 0;
  for (;;) {
    if (good == hi) return hi;
    const std::uint64_t probe = (hi - good > step) ? good + step : hi;
    if (pred(probe)) {
      good = probe;
      if (step < (std::uint64_t{1} << 62)) step *= 2;
    } else {
      bad = probe;
      break;
    }
  }
  while (bad - good > 1) {
    const std::uint64_t mid = good + (bad - good) / 2;
    if (pred(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

}  // namespace detail

}  // namespace exptract
