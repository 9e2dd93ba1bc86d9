#include "exptract/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace exptract {

namespace {

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();

void require_positive_E(double E) {
  if (!(E > 0.0) || std::isnan(E)) throw Error(ErrorCode::InvalidArgument, "E = log(1/eps) must be positive");
}

// Threshold count for a monotone L: max{j : L(j) < budget}, 0 if none.
// Falls back to the closed form when the galloping scan reaches the cap.
std::uint64_t threshold_count(const Sequence& seq, double budget, std::uint64_t cap, const char* what) {
  if (!(seq.eval(1).value() < budget)) return 0;
  const auto below = [&](std::uint64_t j) { return seq.eval(j).value() < budget; };
  const std::uint64_t j = detail::last_true(below, 1, cap);
  if (j < cap || !below(cap)) return j;
  if (const auto x = seq.threshold_bound(budget); x && std::isfinite(*x) && *x < 1.8e19) {
    return static_cast<std::uint64_t>(std::max(std::ceil(*x) - 1.0, 0.0));
  }
  throw Error(ErrorCode::NonCompact, std::string(what) + " still exceeds eps^2 at the search cap " +
                                         std::to_string(cap));
}

// Lazily cached L(j) for small j and G(k) for the active coordinates.
class CostTable {
 public:
  CostTable(const EigenSeq& lambda, const WeightSeq& gamma) : lambda_(lambda), gamma_(gamma) {}

  double L(std::uint64_t j) {
    if (j < kLCache) {
      while (L_.size() <= j) L_.push_back(L_.empty() ? 0.0 : lambda_.eval(L_.size()).value());
      return L_[j];
    }
    return lambda_.eval(j).value();
  }

  double G(std::uint64_t k) {
    while (G_.size() <= k) G_.push_back(G_.empty() ? 0.0 : gamma_.eval(G_.size()).value());
    return G_[k];
  }

 private:
  static constexpr std::uint64_t kLCache = 1 << 16;
  const EigenSeq& lambda_;
  const WeightSeq& gamma_;
  std::vector<double> L_;  // index 0 unused
  std::vector<double> G_;  // index 0 unused
};

// Accumulates a count in a machine word and spills into the big integer.
class Tally {
 public:
  void add(std::uint64_t v) {
    if (small_ > kMaxU64 - v) {
      big_ += small_;
      small_ = 0;
    }
    small_ += v;
  }
  BigCount total() const { return big_ + small_; }

 private:
  std::uint64_t small_ = 0;
  BigCount big_ = 0;
};

}  // namespace

Query::Query(double E_, std::uint64_t d_) : E(E_), d(d_) {
  require_positive_E(E);
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension d must be >= 1");
}

std::uint64_t j_of_eps(const EigenSeq& lambda, double E, std::uint64_t search_cap) {
  require_positive_E(E);
  return threshold_count(lambda, 2.0 * E, search_cap, "lambda_j");
}

std::uint64_t d_of_eps(const WeightSeq& gamma, double E, std::uint64_t search_cap) {
  require_positive_E(E);
  return threshold_count(gamma, 2.0 * E, search_cap, "gamma_d");
}

double tuple_cost(const EigenSeq& lambda, const WeightSeq& gamma, const SparseTuple& t) {
  double acc = 0.0;
  for (const auto& [k, j] : t) acc = acc + (gamma.eval(k).value() + lambda.eval(j).value());
  return acc;
}

CountResult info_complexity(const EigenSeq& lambda, const WeightSeq& gamma, const Query& q,
                            std::uint64_t node_budget, std::uint64_t search_cap) {
  const double B = q.budget();
  CostTable costs(lambda, gamma);
  const double L2 = costs.L(2);

  CountResult result;
  // Coordinates with G(k) + L(2) >= B are pinned to n_k = 1; by monotonicity
  // of G the active ones form a prefix 1..m.
  std::uint64_t m = 0;
  if (gamma.eval(1).value() + L2 < B) {
    m = detail::last_true([&](std::uint64_t k) { return gamma.eval(k).value() + L2 < B; }, 1, q.d);
  }
  result.truncated_dimension = m;

  // Each frame is a counted tuple whose nontrivial coordinates all lie
  // before `k`; it enumerates extensions (k, j) with k increasing.
  struct Frame {
    double acc;
    std::uint64_t k;
    std::uint64_t j = 0;
    std::uint64_t jext = 0;
  };

  Tally tally;
  std::uint64_t nodes = 0;

  const auto charge = [&]() {
    if (++nodes > node_budget) {
      throw Error(ErrorCode::BudgetExceeded, "node budget of " + std::to_string(node_budget) + " exhausted");
    }
  };
  const auto open = [&]() {
    charge();
    tally.add(1);
  };

  // Positions f.k at the next coordinate with extendable children, counting
  // leaf children in bulk along the way. False once the frame is exhausted.
  const auto prepare = [&](Frame& f) {
    while (f.k <= m) {
      const double gk = costs.G(f.k);
      if (!(f.acc + (gk + L2) < B)) return false;
      const auto fits = [&](std::uint64_t j) { return f.acc + (gk + costs.L(j)) < B; };
      const std::uint64_t J = detail::last_true(fits, 2, search_cap);
      if (J == search_cap && fits(search_cap)) {
        throw Error(ErrorCode::NonCompact, "per-coordinate index range reaches the search cap");
      }
      std::uint64_t jext = 1;
      if (f.k < m) {
        const double next = costs.G(f.k + 1) + L2;
        const auto extends = [&](std::uint64_t j) { return (f.acc + (gk + costs.L(j))) + next < B; };
        if (extends(2)) jext = detail::last_true(extends, 2, J);
      }
      tally.add(J - jext);
      if (jext >= 2) {
        f.j = 2;
        f.jext = jext;
        return true;
      }
      // Skipping a coordinate is work too: long runs of equal weights
      // would otherwise escape the budget.
      charge();
      ++f.k;
    }
    return false;
  };

  std::vector<Frame> stack;
  open();
  if (Frame root{0.0, 1}; prepare(root)) stack.push_back(root);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.j > top.jext) {
      ++top.k;
      if (!prepare(top)) stack.pop_back();
      continue;
    }
    Frame child{top.acc + (costs.G(top.k) + costs.L(top.j)), top.k + 1};
    ++top.j;
    open();
    if (prepare(child)) stack.push_back(child);
  }

  result.count = tally.total();
  result.nodes_visited = nodes;
  return result;
}

bool lex_less(const SparseTuple& a, const SparseTuple& b) noexcept {
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    const std::uint64_t ka = ia < a.size() ? a[ia].first : kMaxU64;
    const std::uint64_t kb = ib < b.size() ? b[ib].first : kMaxU64;
    if (ka == kb) {
      if (a[ia].second != b[ib].second) return a[ia].second < b[ib].second;
      ++ia;
      ++ib;
    } else {
      // The tuple missing the smaller coordinate has a 1 there.
      return kb < ka;
    }
  }
  return false;
}

std::vector<TensorEigenvalue> top_eigenpairs(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d,
                                             std::uint64_t K) {
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension d must be >= 1");

  struct Entry {
    double cost;
    SparseTuple tuple;
  };
  struct EntryLess {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.cost != b.cost) return a.cost < b.cost;
      return lex_less(a.tuple, b.tuple);
    }
  };
  struct TupleLess {
    bool operator()(const SparseTuple& a, const SparseTuple& b) const { return lex_less(a, b); }
  };

  const std::uint64_t frontier_cap = std::max<std::uint64_t>(std::uint64_t{1} << 20, 64 * K);
  std::set<Entry, EntryLess> frontier;
  std::set<SparseTuple, TupleLess> seen;

  const auto offer = [&](SparseTuple t) {
    if (seen.contains(t)) return;
    const double c = tuple_cost(lambda, gamma, t);
    seen.insert(t);
    if (std::isinf(c)) return;
    frontier.insert(Entry{c, std::move(t)});
    if (frontier.size() > frontier_cap) {
      throw Error(ErrorCode::BudgetExceeded, "eigenvalue frontier exceeded " + std::to_string(frontier_cap));
    }
  };

  std::vector<TensorEigenvalue> out;
  offer(SparseTuple{});
  while (!frontier.empty()) {
    if (out.size() >= K && frontier.begin()->cost > out.back().cost.value()) break;
    Entry e = std::move(frontier.extract(frontier.begin()).value());

    // Successors: bump any nontrivial coordinate, switch on the coordinate
    // after the last nontrivial one, or shift a last coordinate at level 2
    // one place right. Every tuple is reached from a parent of no larger cost.
    for (std::size_t i = 0; i < e.tuple.size(); ++i) {
      SparseTuple t = e.tuple;
      ++t[i].second;
      offer(std::move(t));
    }
    const std::uint64_t kmax = e.tuple.empty() ? 0 : e.tuple.back().first;
    if (kmax < d) {
      SparseTuple t = e.tuple;
      t.emplace_back(kmax + 1, 2);
      offer(std::move(t));
      if (!e.tuple.empty() && e.tuple.back().second == 2) {
        SparseTuple s = e.tuple;
        s.back().first = kmax + 1;
        offer(std::move(s));
      }
    }
    out.push_back(TensorEigenvalue{ExtLogMag(e.cost), std::move(e.tuple)});
  }

  // Children of a tie class can be lexicographically smaller than members
  // already popped; restore the (cost, lex) order.
  std::stable_sort(out.begin(), out.end(), [](const TensorEigenvalue& a, const TensorEigenvalue& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return lex_less(a.tuple, b.tuple);
  });
  while (out.size() < K) out.push_back(TensorEigenvalue{ExtLogMag::infinity(), {}});
  return out;
}

std::vector<ExtLogMag> top_eigenvalues(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d,
                                       std::uint64_t K) {
  std::vector<ExtLogMag> costs;
  for (const auto& e : top_eigenpairs(lambda, gamma, d, K)) costs.push_back(e.cost);
  return costs;
}

ExtLogMag nth_minimal_error(const EigenSeq& lambda, const WeightSeq& gamma, std::uint64_t d, std::uint64_t n) {
  const auto top = top_eigenvalues(lambda, gamma, d, n + 1);
  return top[n].half();
}

}  // namespace exptract
