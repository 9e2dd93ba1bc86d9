#include "exptract/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "exptract/tractability.hpp"

namespace exptract {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const BigCount& v) { return v.str(); }

std::string fmt(std::uint64_t v) { return std::to_string(v); }

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

}  // namespace

bool AuditReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

void AuditReport::add(std::string name, bool ok, std::string lhs, std::string rhs, std::string note) {
  checks.push_back({std::move(name), ok, std::move(lhs), std::move(rhs), std::move(note)});
}

nlohmann::json AuditReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"status", c.passed ? "pass" : "fail"}, {"lhs", c.lhs}, {"rhs", c.rhs},
                   {"note", c.note}});
  }
  return {{"instance", instance}, {"passed", passed()}, {"checks", arr}};
}

BigCount brute_force_count(const EigenSeq& lambda, const WeightSeq& gamma, const Query& q, std::uint64_t box) {
  if (box < 1) throw Error(ErrorCode::InvalidArgument, "box must be >= 1");
  const double B = q.budget();
  if (std::pow(static_cast<double>(box), static_cast<double>(q.d)) > kBruteForceGuard) {
    throw Error(ErrorCode::GuardExceeded, "box^d = " + fmt(box) + "^" + fmt(q.d) + " exceeds 1e8");
  }
  // Cheapest tuple using index box + 1 sits in coordinate 1.
  if (gamma.eval(1).value() + lambda.eval(box + 1).value() < B) {
    throw Error(ErrorCode::BoxTooSmall, "index " + fmt(box + 1) + " still qualifies; enlarge the box");
  }

  const std::size_t d = q.d;
  std::vector<double> G(d + 1), L(box + 1);
  for (std::size_t k = 1; k <= d; ++k) G[k] = gamma.eval(k).value();
  for (std::uint64_t j = 1; j <= box; ++j) L[j] = lambda.eval(j).value();

  // Odometer over {1..box}^d. prefix[k] is the cost of coordinates 1..k,
  // accumulated in coordinate order like tuple_cost.
  std::vector<std::uint64_t> n(d + 1, 1);
  std::vector<double> prefix(d + 1, 0.0);
  const auto term = [&](std::size_t k) { return n[k] >= 2 ? prefix[k - 1] + (G[k] + L[n[k]]) : prefix[k - 1]; };
  for (std::size_t k = 1; k <= d; ++k) prefix[k] = term(k);

  BigCount count = 0;
  std::uint64_t run = 0;
  for (;;) {
    if (prefix[d] < B) ++run;
    std::size_t k = d;
    while (k >= 1 && n[k] == box) {
      n[k] = 1;
      --k;
    }
    if (k == 0) break;
    ++n[k];
    for (std::size_t i = k; i <= d; ++i) prefix[i] = term(i);
  }
  count += run;
  return count;
}

AuditReport check_lemma1(const EigenSeq& lambda, const WeightSeq& gamma, double E, std::uint64_t d,
                         std::uint64_t node_budget) {
  const Query q(E, d);
  AuditReport rep;
  rep.instance = "lambda=" + lambda.to_json().dump() + " gamma=" + gamma.to_json().dump() + " E=" + fmt(E) +
                 " d=" + fmt(d);

  const std::uint64_t jE = j_of_eps(lambda, E);
  const std::uint64_t dE = d_of_eps(gamma, E);
  const std::uint64_t m = std::min(d, dE);

  const BigCount left = info_complexity(lambda, gamma, q, node_budget).count;
  const BigCount middle = boost::multiprecision::pow(BigCount(jE), static_cast<unsigned>(m));

  rep.add("sandwich_left: count(E,d) <= j(E)^min(d,d(E))", left <= middle, fmt(left), fmt(middle));

  // Right side: count at E' = 2 d(E) E in dimension d(E).
  if (dE == 0) {
    rep.add("sandwich_right: j(E)^min(d,d(E)) <= count(2d(E)E, d(E))", middle == 1, fmt(middle), "1",
            "d(E) = 0: empty product on both sides");
  } else {
    const double E2 = 2.0 * static_cast<double>(dE) * E;
    if (!std::isfinite(2.0 * E2)) {
      rep.add("sandwich_right: j(E)^min(d,d(E)) <= count(2d(E)E, d(E))", true, fmt(middle), "inf",
              "vacuous: budget saturates");
    } else {
      // Exact count when it stays small; otherwise the corner tuple
      // (j(E), ..., j(E)) certifies that the whole box [1, j(E)]^d(E) qualifies.
      constexpr double kExactLimit = 1e6;
      bool done = false;
      if (std::pow(static_cast<double>(jE), static_cast<double>(dE)) <= kExactLimit) {
        try {
          const BigCount right = info_complexity(lambda, gamma, Query(E2, dE), node_budget).count;
          rep.add("sandwich_right: j(E)^min(d,d(E)) <= count(2d(E)E, d(E))", middle <= right, fmt(middle),
                  fmt(right));
          done = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BudgetExceeded) throw;
        }
      }
      if (!done) {
        SparseTuple corner;
        if (jE >= 2) {
          for (std::uint64_t k = 1; k <= dE; ++k) corner.emplace_back(k, jE);
        }
        const double cost = tuple_cost(lambda, gamma, corner);
        const double B2 = 2.0 * E2;
        const BigCount box = boost::multiprecision::pow(BigCount(jE), static_cast<unsigned>(dE));
        rep.add("sandwich_right: j(E)^min(d,d(E)) <= count(2d(E)E, d(E))", cost < B2 && middle <= box, fmt(middle),
                ">= " + fmt(box), "corner cost " + fmt(cost) + " < " + fmt(B2));
      }
    }
  }

  if (d >= dE && dE >= 1) {
    const BigCount at_dE = info_complexity(lambda, gamma, Query(E, dE), node_budget).count;
    rep.add("dimension_truncation: count(E,d) == count(E,d(E))", left == at_dE, fmt(left), fmt(at_dE));
  } else if (d >= dE) {
    rep.add("dimension_truncation: count(E,d) == 1 when d(E) = 0", left == 1, fmt(left), "1");
  }
  return rep;
}

PowerSumSplit power_sum_split(double s, const std::vector<double>& a) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "power_sum_split needs m >= 1");
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be nonnegative");
  double sum = 0.0;
  double sum_pow = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "entries must be nonnegative");
    sum += x;
    sum_pow += std::pow(x, s);  // pow(0, 0) == 1
  }
  const double m = static_cast<double>(a.size());
  PowerSumSplit r;
  r.alpha = sum_pow == 0.0 ? 1.0 : std::pow(sum, s) / sum_pow;
  const double bound = std::pow(m, s - 1.0);
  r.lower = std::min(1.0, bound);
  r.upper = std::max(1.0, bound);
  constexpr double tol = 1e-12;
  r.within = r.alpha >= r.lower * (1.0 - tol) && r.alpha <= r.upper * (1.0 + tol);
  return r;
}

AuditReport check_lemma2_family(const Sequence& seq, const std::vector<double>& c_list,
                                const std::vector<std::uint64_t>& j_grid) {
  AuditReport rep;
  rep.instance = seq.to_json().dump();
  const DivergenceReport div = divergence_check(seq, 1.0, j_grid);
  if (div.mode != Mode::Analytic) {
    throw Error(ErrorCode::InvalidArgument, "summability audit needs an analytic divergence class");
  }
  const bool diverges = div.kind == DivergenceReport::Kind::Diverges;
  for (double c : c_list) {
    const bool expect_finite = diverges || c * div.limit > 1.0;
    std::string observed;
    bool finite = false;
    try {
      const SummabilityResult r = summability_adaptive(seq, c);
      finite = r.tail_bound.has_value() && std::isfinite(*r.tail_bound);
      observed = finite ? "finite (partial " + fmt(r.partial) + ", tail <= " + fmt(*r.tail_bound) + ")"
                        : "no tail bound";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DivergentTail) throw;
      observed = "divergent";
    }
    const bool ok = expect_finite ? finite : observed == "divergent";
    rep.add("summability_vs_divergence c=" + fmt(c), ok, observed,
            expect_finite ? "finite" : "divergent",
            diverges ? "log ratio diverges" : "log ratio bounded by " + fmt(div.limit));
  }
  return rep;
}

OracleInstance random_oracle_instance(std::mt19937_64& rng) {
  const bool grid = rng() % 2 == 0;  // quarter-step costs provoke exact ties with the budget
  const auto step = [&](double scale) {
    return grid ? 0.25 * static_cast<double>(pick(rng, 0, 6)) : scale * unit(rng);
  };
  const std::uint64_t d = pick(rng, 1, 4);
  const std::uint64_t n = pick(rng, 2, 20);

  std::vector<ExtLogMag> L{ExtLogMag(0.0)};
  L.emplace_back(grid ? 0.25 * static_cast<double>(pick(rng, 1, 6)) : 0.05 + 1.5 * unit(rng));
  while (L.size() < n) L.emplace_back(L.back().value() + step(1.5));

  std::vector<ExtLogMag> G{ExtLogMag(step(0.5))};
  while (G.size() < d) G.emplace_back(G.back().value() + step(1.0));

  const double top = L.back().value() + G.back().value();
  double B = grid ? 0.25 * static_cast<double>(pick(rng, 1, static_cast<std::uint64_t>(4.0 * top) + 2))
                  : (0.05 + 1.2 * unit(rng)) * (top + 0.1);
  return {EigenSeq(family::Tabulated{L}), WeightSeq(family::Tabulated{G}), Query(B / 2.0, d), n};
}

AuditCheck oracle_check(const OracleInstance& inst, const std::string& name) {
  const BigCount fast = info_complexity(inst.lambda, inst.gamma, inst.query).count;
  const BigCount slow = brute_force_count(inst.lambda, inst.gamma, inst.query, inst.box);
  return {name, fast == slow, fmt(fast), fmt(slow),
          "d=" + fmt(inst.query.d) + " n=" + fmt(inst.box) + " E=" + fmt(inst.query.E)};
}

}  // namespace exptract

namespace exptract {

std::vector<GoldenFamily> golden_families() {
  using namespace family;
  const double ln2 = std::log(2.0);
  std::vector<GoldenFamily> out;
  out.push_back({"dyadic", EigenSeq(ExpPower{ln2, 1.0}), WeightSeq(ExpPower{1.0, 1.0}, false),
                 {0.5, 1.0, 2.0, 4.0, 8.0}, {1, 2, 5, 20}});
  out.push_back({"double-exp beta=1", EigenSeq(DoubleExpPower{1.0, 1.0}), WeightSeq(DoubleExpPower{1.0, 1.0}, false),
                 {2.0, 10.0, 100.0, 1e3, 1e4}, {1, 3, 10}});
  out.push_back({"double-exp beta=2", EigenSeq(DoubleExpPower{1.0, 1.0}), WeightSeq(DoubleExpPower{1.0, 2.0}, false),
                 {2.0, 10.0, 100.0, 1e3, 1e4}, {1, 3, 10}});
  out.push_back({"triple-exp weights", EigenSeq(DoubleExpPower{1.0, 1.0}), WeightSeq(TripleExp{1.0}, false),
                 {2.0, 10.0, 100.0, 1e3, 1e4}, {1, 3, 10}});
  out.push_back({"iterated-log", EigenSeq::iter_log(), WeightSeq(InverseLog{}), {0.25, 0.3, 0.35, 0.4}, {1, 2, 8}});
  out.push_back({"log-power", EigenSeq(LogPower{2.0}),
                 WeightSeq(EventuallyZero{4, {ExtLogMag(0.0), ExtLogMag(ln2), ExtLogMag(2.0 * ln2)}}),
                 {1.0, 2.0, 4.0, 8.0, 16.0}, {1, 2, 3, 6}});
  return out;
}

}  // namespace exptract
