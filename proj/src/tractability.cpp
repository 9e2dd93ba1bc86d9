#include "exptract/tractability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>

#include <boost/math/special_functions/gamma.hpp>

#include "exptract/asymptotics.hpp"

namespace exptract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

void require_increasing_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "E grid must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 1.0)) throw Error(ErrorCode::InvalidArgument, "E grid entries must exceed 1");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "E grid must be strictly increasing");
  }
}

// Three-valued condition with the mode it was decided in.
struct Condition {
  enum class Value { True, False, Unknown };
  std::string name;
  Value value = Value::Unknown;
  Mode mode = Mode::Numeric;
  nlohmann::json detail = nlohmann::json::object();

  Diagnostic diagnostic() const {
    nlohmann::json d = detail;
    d["value"] = value == Value::True ? "true" : value == Value::False ? "false" : "unknown";
    d["mode"] = to_string(mode);
    return {name, d};
  }
};

Condition tends_to_zero_condition(const Sequence& seq, const char* name, bool is_eigen, const ProbePolicy& policy) {
  Condition c{name};
  if (const auto z = seq.tends_to_zero()) {
    c.value = *z ? Condition::Value::True : Condition::Value::False;
    c.mode = Mode::Analytic;
    c.detail["family"] = family_name(seq.family());
    return c;
  }
  // Numeric evidence: growth of the threshold index along the E grid.
  auto rows = nlohmann::json::array();
  for (double E : policy.e_grid) {
    try {
      const std::uint64_t n = is_eigen ? j_of_eps(static_cast<const EigenSeq&>(seq), E, policy.search_cap)
                                       : d_of_eps(static_cast<const WeightSeq&>(seq), E, policy.search_cap);
      rows.push_back({{"E", real(E)}, {"threshold", n}});
    } catch (const Error& e) {
      rows.push_back({{"E", real(E)}, {"error", e.what()}});
    }
  }
  c.detail["threshold_probes"] = rows;
  return c;
}

Condition divergence_condition(const Sequence& seq, double s, const std::string& name, const ProbePolicy& policy) {
  Condition c{name};
  const DivergenceReport rep = divergence_check(seq, s, policy.j_grid);
  c.detail["s"] = s;
  c.detail["check"] = rep.to_json();
  switch (rep.kind) {
    case DivergenceReport::Kind::Diverges:
      c.value = Condition::Value::True;
      c.mode = Mode::Analytic;
      break;
    case DivergenceReport::Kind::Bounded:
      c.value = Condition::Value::False;
      c.mode = Mode::Analytic;
      break;
    case DivergenceReport::Kind::Inconclusive:
      if (policy.promote_numeric && rep.evidence.trend == Trend::Increasing) {
        c.value = Condition::Value::True;
        c.detail["promoted"] = true;
      }
      break;
  }
  return c;
}

Condition weight_below_one_condition(const WeightSeq& gamma) {
  Condition c{"exists_gamma_p_below_one"};
  constexpr std::uint64_t kScan = 64;
  for (std::uint64_t k = 1; k <= kScan; ++k) {
    if (gamma.eval(k).value() > 0.0) {
      c.value = Condition::Value::True;
      c.mode = Mode::Analytic;
      c.detail["witness_p"] = k;
      return c;
    }
  }
  c.detail["scanned_up_to"] = kScan;
  if (gamma.has_analytic() && std::holds_alternative<family::ConstantOne>(gamma.family())) {
    c.value = Condition::Value::False;
    c.mode = Mode::Analytic;
  }
  return c;
}

Verdict assemble(const Notion& notion, std::string rule, const std::vector<Condition>& conds) {
  Verdict v;
  v.notion = notion;
  v.rule = std::move(rule);
  bool all_true = true;
  bool any_false = false;
  bool all_analytic = true;
  for (const auto& c : conds) {
    v.evidence.push_back(c.diagnostic());
    if (c.value == Condition::Value::False && c.mode == Mode::Analytic) any_false = true;
    if (c.value != Condition::Value::True) all_true = false;
    if (c.mode != Mode::Analytic) all_analytic = false;
  }
  if (any_false) {
    v.status = Verdict::Status::Fails;
    v.mode = Mode::Analytic;
  } else if (all_true) {
    v.status = Verdict::Status::Holds;
    v.mode = all_analytic ? Mode::Analytic : Mode::Numeric;
  } else {
    v.status = Verdict::Status::Inconclusive;
    v.mode = Mode::Numeric;
  }
  return v;
}

Growth log_e() {
  Growth g;
  g.q = 1.0;
  return g;
}

}  // namespace

std::string Notion::name() const {
  switch (kind) {
    case Kind::ExpSpt: return "EXP-SPT";
    case Kind::ExpPt: return "EXP-PT";
    case Kind::ExpQpt: return "EXP-QPT";
    case Kind::ExpWt: return "EXP-WT";
    case Kind::ExpUwt: return "EXP-UWT";
    case Kind::ExpStWt: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "EXP-(%g,%g)-WT", s, t);
      return buf;
    }
  }
  return "?";
}

Notion Notion::parse(const std::string& kind, double s, double t) {
  if (kind == "EXP-SPT") return spt();
  if (kind == "EXP-PT") return pt();
  if (kind == "EXP-QPT") return qpt();
  if (kind == "EXP-WT") return wt();
  if (kind == "EXP-UWT") return {Kind::ExpUwt};
  if (kind == "EXP-(s,t)-WT") return st_wt(s, t);
  throw Error(ErrorCode::ConfigError, "unknown notion '" + kind + "'");
}

const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Flat: return "flat";
    case Trend::Oscillating: return "oscillating";
  }
  return "?";
}

const char* to_string(Mode m) noexcept { return m == Mode::Analytic ? "analytic" : "numeric"; }

const char* to_string(Verdict::Status s) noexcept {
  switch (s) {
    case Verdict::Status::Holds: return "Holds";
    case Verdict::Status::Fails: return "Fails";
    case Verdict::Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Trend classify_trend(const std::vector<double>& values, double rel_tol) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1];
    const double b = values[i];
    if (a == b) continue;
    if (std::isfinite(a) && std::isfinite(b) && std::fabs(b - a) <= rel_tol * std::max(std::fabs(a), std::fabs(b))) continue;
    if (b > a) {
      up = true;
    } else {
      down = true;
    }
  }
  if (up && down) return Trend::Oscillating;
  if (up) return Trend::Increasing;
  if (down) return Trend::Decreasing;
  return Trend::Flat;
}

LimitEstimate make_estimate(std::vector<Probe> probes, std::vector<std::pair<double, std::string>> skipped) {
  LimitEstimate est;
  est.probes = std::move(probes);
  est.skipped = std::move(skipped);
  std::vector<double> ratios;
  for (const auto& p : est.probes) ratios.push_back(p.ratio);
  est.trend = classify_trend(ratios);
  if (!ratios.empty()) {
    est.tail_sup = *std::max_element(ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2), ratios.end());
  }
  return est;
}

nlohmann::json LimitEstimate::to_json() const {
  auto probes_json = nlohmann::json::array();
  for (const auto& p : probes) probes_json.push_back({{"x", real(p.x)}, {"ratio", real(p.ratio)}});
  auto skipped_json = nlohmann::json::array();
  for (const auto& [x, why] : skipped) skipped_json.push_back({{"x", real(x)}, {"reason", why}});
  return {{"probes", probes_json}, {"tail_sup", real(tail_sup)}, {"trend", to_string(trend)}, {"skipped", skipped_json}};
}

LimitEstimate b_spt_estimate(const EigenSeq& lambda, const WeightSeq& gamma, const std::vector<double>& e_grid,
                             std::uint64_t search_cap) {
  require_increasing_grid(e_grid);
  std::vector<Probe> probes;
  std::vector<std::pair<double, std::string>> skipped;
  for (double E : e_grid) {
    const std::uint64_t j = j_of_eps(lambda, E, search_cap);
    const std::uint64_t d = d_of_eps(gamma, E, search_cap);
    if (d == 0) {
      skipped.emplace_back(E, "d(eps) = 0");
      continue;
    }
    probes.push_back({E, static_cast<double>(d) * std::log(static_cast<double>(j)) / std::log(E)});
  }
  return make_estimate(std::move(probes), std::move(skipped));
}

LimitEstimate b_qpt_estimate(const EigenSeq& lambda, const WeightSeq& gamma, const std::vector<double>& e_grid,
                             std::uint64_t search_cap) {
  require_increasing_grid(e_grid);
  std::vector<Probe> probes;
  std::vector<std::pair<double, std::string>> skipped;
  for (double E : e_grid) {
    const std::uint64_t j = j_of_eps(lambda, E, search_cap);
    const std::uint64_t d = d_of_eps(gamma, E, search_cap);
    if (d < 2) {
      skipped.emplace_back(E, "d(eps) < 2");
      continue;
    }
    const double dd = static_cast<double>(d);
    probes.push_back({E, dd * std::log(static_cast<double>(j)) / (std::log(dd) * std::log(E))});
  }
  return make_estimate(std::move(probes), std::move(skipped));
}

nlohmann::json DivergenceReport::to_json() const {
  const char* k = kind == Kind::Diverges ? "Diverges" : kind == Kind::Bounded ? "Bounded" : "Inconclusive";
  nlohmann::json j{{"result", k}, {"mode", exptract::to_string(mode)}, {"evidence", evidence.to_json()}};
  if (kind == Kind::Bounded) j["limit"] = real(limit);
  return j;
}

DivergenceReport divergence_check(const Sequence& seq, double s, const std::vector<std::uint64_t>& j_grid) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be positive");
  std::vector<Probe> probes;
  for (std::size_t i = 0; i < j_grid.size(); ++i) {
    const std::uint64_t j = j_grid[i];
    if (j < 2) throw Error(ErrorCode::InvalidArgument, "j grid entries must be >= 2");
    if (i > 0 && j <= j_grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "j grid must be increasing");
    const double L = seq.eval(j).value();
    probes.push_back({static_cast<double>(j), std::pow(L, s) / std::log(static_cast<double>(j))});
  }
  DivergenceReport rep;
  rep.evidence = make_estimate(std::move(probes));
  if (const auto cls = seq.divergence_class(s)) {
    rep.mode = Mode::Analytic;
    rep.kind = cls->kind == DivergenceClass::Kind::Diverges ? DivergenceReport::Kind::Diverges
                                                            : DivergenceReport::Kind::Bounded;
    rep.limit = cls->limit;
  }
  return rep;
}

namespace {

// Bound on sum_{j > J} x_j^c from the family's closed form.
std::optional<double> tail_bound(const Sequence& seq, double c, std::uint64_t J) {
  const double Jd = static_cast<double>(J);
  const auto term = [&](std::uint64_t j) { return std::exp(-c * seq.eval(j).value()); };
  // Geometric bound for convex L: successive ratios are non-increasing.
  const auto geometric = [&]() -> double {
    const double L1 = seq.eval(J + 1).value();
    if (std::isinf(L1)) return 0.0;
    const double r = std::exp(-c * (seq.eval(J + 2).value() - L1));
    return r < 1.0 ? term(J + 1) / (1.0 - r) : kInf;
  };

  if (const auto* t = std::get_if<family::Tabulated>(&seq.family())) {
    if (J >= t->values.size()) return 0.0;
    return std::nullopt;
  }
  if (const auto* z = std::get_if<family::EventuallyZero>(&seq.family())) {
    if (J + 1 >= z->j_star) return 0.0;
    return std::nullopt;
  }
  if (!seq.has_analytic()) return std::nullopt;

  return std::visit(
      [&](const auto& f) -> std::optional<double> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::PowerLaw>) {
          // x^(-ac) is convex: sum_{j > J} <= integral from J + 1/2.
          const double e = f.a * c;
          return std::pow(Jd + 0.5, 1.0 - e) / (e - 1.0);
        } else if constexpr (std::is_same_v<F, family::ExpPower>) {
          if (f.beta >= 1.0) return geometric();
          // integral_J^inf exp(-c alpha x^beta) dx via the upper incomplete gamma
          const double ca = c * f.alpha;
          const double a = 1.0 / f.beta;
          const double shift = seq.normalized() ? std::exp(ca) : 1.0;
          return shift * a * std::pow(ca, -a) * boost::math::tgamma(a, ca * std::pow(Jd, f.beta));
        } else if constexpr (std::is_same_v<F, family::DoubleExpPower>) {
          // exp(alpha j^beta) is convex once alpha beta j^beta >= 1 - beta.
          if (f.alpha * f.beta * std::pow(Jd + 1.0, f.beta) < 1.0 - f.beta) return std::nullopt;
          return geometric();
        } else if constexpr (std::is_same_v<F, family::TripleExp>) {
          return geometric();
        } else if constexpr (std::is_same_v<F, family::LogPower>) {
          // With u = log x: integral of exp(u - c u^beta) du from log J,
          // bounded by exp(-g(u0)) / g'(u0) while g' = c beta u^(beta-1) - 1 > 0.
          const double u0 = std::log(Jd);
          const double slope = c * f.beta * std::pow(u0, f.beta - 1.0) - 1.0;
          if (!(slope > 0.0)) return std::nullopt;
          return std::exp(u0 - c * std::pow(u0, f.beta)) / slope;
        } else if constexpr (std::is_same_v<F, family::IterLog>) {
          if (J < f.prefix.size() || J + 1 < 3) return std::nullopt;
          const double p = c * std::log(std::log(Jd + 1.0));
          if (!(p > 1.0)) return std::nullopt;
          return std::pow(Jd + 0.5, 1.0 - p) / (p - 1.0);
        } else {
          return std::nullopt;
        }
      },
      seq.family());
}

void check_summable(const Sequence& seq, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "summability exponent c must be positive");
  if (!seq.has_analytic()) return;
  if (const auto* p = std::get_if<family::PowerLaw>(&seq.family()); p && p->a * c <= 1.0) {
    throw Error(ErrorCode::DivergentTail, "sum of j^(-a c) diverges for a c <= 1");
  }
  if (std::holds_alternative<family::ConstantOne>(seq.family()) ||
      std::holds_alternative<family::InverseLog>(seq.family())) {
    throw Error(ErrorCode::DivergentTail, family_name(seq.family()) + " terms do not decay fast enough to sum");
  }
}

// sum_{j = lo..hi} x_j^c, smallest terms first.
double partial_sum(const Sequence& seq, double c, std::uint64_t lo, std::uint64_t hi) {
  double acc = 0.0;
  for (std::uint64_t j = hi; j >= lo; --j) {
    acc += std::exp(-c * seq.eval(j).value());
    if (j == lo) break;
  }
  return acc;
}

}  // namespace

SummabilityResult summability(const Sequence& seq, double c, std::uint64_t J) {
  check_summable(seq, c);
  if (J < 2) throw Error(ErrorCode::InvalidArgument, "truncation index J must be >= 2");
  SummabilityResult res;
  res.J = J;
  res.partial = partial_sum(seq, c, 1, J);
  res.tail_bound = tail_bound(seq, c, J);
  return res;
}

SummabilityResult summability_adaptive(const Sequence& seq, double c, double rel_tol, std::uint64_t J_max) {
  check_summable(seq, c);
  SummabilityResult res;
  std::uint64_t J = 64;
  double tail_part = partial_sum(seq, c, 2, J);
  for (;;) {
    res.J = J;
    res.partial = 1.0 + tail_part;
    res.tail_bound = tail_bound(seq, c, J);
    if ((res.tail_bound && *res.tail_bound < rel_tol * res.partial) || J >= J_max) return res;
    const std::uint64_t next = std::min(J * 2, J_max);
    tail_part += partial_sum(seq, c, J + 1, next);
    J = next;
  }
}

Condwt3Result condwt3_sup(const EigenSeq& lambda, const WeightSeq& gamma, double c, double t, std::uint64_t dmax) {
  if (dmax < 1) throw Error(ErrorCode::InvalidArgument, "dmax must be >= 1");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  const SummabilityResult m = summability_adaptive(lambda, c);
  Condwt3Result res;
  res.tail_known = m.tail_bound.has_value();
  res.m_star = m.partial - 1.0 + m.tail_bound.value_or(0.0);

  double running = 0.0;
  double prev = 0.0;
  res.sup = -kInf;
  for (std::uint64_t d = 1; d <= dmax; ++d) {
    running += std::log1p(std::exp(-c * gamma.eval(d).value()) * res.m_star);
    const double expr = running - c * std::pow(static_cast<double>(d), t);
    if (expr > res.sup) {
      res.sup = expr;
      res.argmax = d;
    }
    if (d == dmax) res.growing = dmax >= 2 && expr > prev;
    prev = expr;
  }
  return res;
}

LimitEstimate condition_111_check(const EigenSeq& lambda, const WeightSeq& gamma, double s,
                                  const std::vector<Triple>& triples) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "condition (111) needs 0 < s < 1");
  std::vector<Probe> raw;
  for (const auto& [d, k, j] : triples) {
    if (j < 2 || k < 1 || k > d) throw Error(ErrorCode::InvalidArgument, "triples need j >= 2 and 1 <= k <= d");
    const double G = gamma.eval(k).value();
    const double L = lambda.eval(j).value();
    const double dd = static_cast<double>(d);
    // log(d + exp(d (G + L)))
    const double expo = dd * (G + L);
    const double scale = std::isinf(expo) ? kInf : std::max(std::log(dd), expo) + std::log1p(std::exp(-std::fabs(expo - std::log(dd))));
    const double ratio = (std::pow(G, s) + std::pow(L, s)) / (std::pow(dd, 1.0 - s) * std::log(static_cast<double>(j)));
    raw.push_back({scale, ratio});
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Probe& a, const Probe& b) { return a.x < b.x; });
  std::vector<Probe> merged;
  for (const auto& p : raw) {
    if (!merged.empty() && merged.back().x == p.x) {
      merged.back().ratio = std::min(merged.back().ratio, p.ratio);
    } else {
      merged.push_back(p);
    }
  }
  return make_estimate(std::move(merged));
}

std::vector<Triple> net_111(Net111 kind, std::size_t size) {
  std::vector<Triple> out;
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint64_t p = std::uint64_t{1} << std::min<std::size_t>(i + 1, 62);
    switch (kind) {
      case Net111::GrowDimension: out.push_back({p, p, 2}); break;
      case Net111::GrowIndex: out.push_back({1, 1, p}); break;
      case Net111::Diagonal: out.push_back({p, p, p}); break;
    }
  }
  return out;
}

double lemma4_ratio(const EigenSeq& lambda, const WeightSeq& gamma, double s, double t, std::uint64_t d,
                    const std::vector<std::uint64_t>& k_list) {
  if (d < 1 || k_list.size() != d) throw Error(ErrorCode::InvalidArgument, "k_list must hold d entries");
  double sum_g = 0.0;
  double sum_l = 0.0;
  double sum_log_k = 0.0;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (k_list[i] < 2) throw Error(ErrorCode::InvalidArgument, "k_list entries must be >= 2");
    sum_g += gamma.eval(i + 1).value();
    sum_l += lambda.eval(k_list[i]).value();
    sum_log_k += std::log(static_cast<double>(k_list[i]));
  }
  return (std::pow(static_cast<double>(d), t) + std::pow(sum_g, s) + std::pow(sum_l, s)) / sum_log_k;
}

double item10_eta(double s, double t) {
  if (!(s > 0.0 && s < 1.0 && t > 1.0)) throw Error(ErrorCode::InvalidArgument, "eta is defined for s < 1 < t");
  return s * (t - 1.0) / (t - s);
}

std::vector<double> double_exponential_grid(double base, std::size_t count) {
  if (!(base > 1.0)) throw Error(ErrorCode::InvalidArgument, "grid base must exceed 1");
  std::vector<double> grid;
  for (std::size_t i = 1; i <= count; ++i) grid.push_back(std::pow(base, std::ldexp(1.0, static_cast<int>(i))));
  return grid;
}

ProbePolicy ProbePolicy::defaults() {
  ProbePolicy p;
  p.e_grid = double_exponential_grid(10.0, 8);
  std::uint64_t j = 1;
  for (int i = 1; i <= 18; ++i) p.j_grid.push_back(j *= 10);
  return p;
}

const Diagnostic* Verdict::find(const std::string& name) const {
  for (const auto& d : evidence) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

nlohmann::json Verdict::to_json() const {
  auto ev = nlohmann::json::array();
  for (const auto& d : evidence) ev.push_back({{"name", d.name}, {"detail", d.detail}});
  nlohmann::json j{{"notion", notion.name()},
                   {"status", to_string(status)},
                   {"mode", to_string(mode)},
                   {"rule", rule},
                   {"evidence", ev}};
  j["exponent"] = exponent ? real(*exponent) : nlohmann::json();
  return j;
}

namespace {

// d(eps) = exp(exp(2E)) - 2 outgrows every power of log(1/eps), so both
// limits are infinite as soon as j(eps) -> infinity.
bool inverse_log_weights(const WeightSeq& gamma) {
  return gamma.has_analytic() && std::holds_alternative<family::InverseLog>(gamma.family());
}

}  // namespace

std::optional<double> analytic_b_spt(const EigenSeq& lambda, const WeightSeq& gamma) {
  const auto gl = threshold_growth(lambda);
  if (gl && !gl->is_constant() && inverse_log_weights(gamma)) return kInf;
  const auto gg = threshold_growth(gamma);
  if (!gl || !gg) return std::nullopt;
  if (gg->infinite) return kInf;
  if (gg->is_constant() && gg->coef == 0.0) return 0.0;
  return limit_of(*gg * log_of(*gl) / log_e());
}

std::optional<double> analytic_b_qpt(const EigenSeq& lambda, const WeightSeq& gamma) {
  const auto gl = threshold_growth(lambda);
  if (gl && !gl->is_constant() && inverse_log_weights(gamma)) return kInf;
  const auto gg = threshold_growth(gamma);
  if (!gl || !gg) return std::nullopt;
  if (gg->infinite) return kInf;
  // d(eps) eventually constant below 2: log d(eps) vanishes and n = j(eps)^d(eps);
  // the quasi-polynomial bound at d = 1 reduces to the EXP-SPT constant.
  if (gg->is_constant() && gg->coef < 2.0) return analytic_b_spt(lambda, gamma);
  return limit_of(*gg * log_of(*gl) / (log_of(*gg) * log_e()));
}

Verdict classify(const EigenSeq& lambda, const WeightSeq& gamma, const Notion& notion, const ProbePolicy& policy) {
  using K = Notion::Kind;
  if (notion.kind == K::ExpUwt) {
    throw Error(ErrorCode::UnsupportedNotion, "EXP-UWT is not characterized");
  }
  if (notion.kind == K::ExpPt) {
    Verdict v = classify(lambda, gamma, Notion::spt(), policy);
    v.notion = notion;
    v.rule = "EXP-PT is equivalent to EXP-SPT; " + v.rule;
    v.evidence.push_back({"delegated_to", {{"notion", "EXP-SPT"}}});
    return v;
  }

  if (notion.kind == K::ExpSpt || notion.kind == K::ExpQpt) {
    const bool spt = notion.kind == K::ExpSpt;
    std::vector<Condition> conds{tends_to_zero_condition(lambda, "lambda_to_zero", true, policy),
                                 tends_to_zero_condition(gamma, "gamma_to_zero", false, policy)};
    Condition bound{spt ? "b_spt_finite" : "b_qpt_finite"};
    const auto b = spt ? analytic_b_spt(lambda, gamma) : analytic_b_qpt(lambda, gamma);
    if (b) {
      bound.mode = Mode::Analytic;
      bound.value = std::isfinite(*b) ? Condition::Value::True : Condition::Value::False;
      bound.detail["limit"] = real(*b);
    }
    try {
      const LimitEstimate est = spt ? b_spt_estimate(lambda, gamma, policy.e_grid, policy.search_cap)
                                    : b_qpt_estimate(lambda, gamma, policy.e_grid, policy.search_cap);
      bound.detail["estimate"] = est.to_json();
    } catch (const Error& e) {
      bound.detail["estimate_error"] = e.what();
    }
    conds.push_back(bound);
    Verdict v = assemble(notion, spt ? "lim lambda_j = lim gamma_j = 0 and B_SPT < inf; p* = B_SPT"
                                     : "lim lambda_j = lim gamma_j = 0 and B_QPT < inf; t* = B_QPT",
                         conds);
    if (v.status == Verdict::Status::Holds && b) v.exponent = *b;
    return v;
  }

  const double s = notion.kind == K::ExpWt ? 1.0 : notion.s;
  const double t = notion.kind == K::ExpWt ? 1.0 : notion.t;
  if (!(s > 0.0 && t > 0.0)) throw Error(ErrorCode::UnsupportedNotion, "s and t must be positive");
  if (std::max(s, t) < 1.0) {
    throw Error(ErrorCode::UnsupportedNotion, "EXP-(s,t)-WT with max(s,t) < 1 is not characterized");
  }

  if (s == 1.0 && t == 1.0) {
    return assemble(notion, "lim gamma_j = 0 and log(1/lambda_j)/log j -> inf",
                    {tends_to_zero_condition(gamma, "gamma_to_zero", false, policy),
                     divergence_condition(lambda, 1.0, "lambda_log_ratio_diverges", policy)});
  }
  if (s == 1.0 && t < 1.0) {
    return assemble(notion, "log(1/gamma_j)/log j -> inf and log(1/lambda_j)/log j -> inf",
                    {divergence_condition(gamma, 1.0, "gamma_log_ratio_diverges", policy),
                     divergence_condition(lambda, 1.0, "lambda_log_ratio_diverges", policy)});
  }
  if (s == 1.0 && t > 1.0) {
    return assemble(notion, "arbitrary gamma; log(1/lambda_j)/log j -> inf",
                    {divergence_condition(lambda, 1.0, "lambda_log_ratio_diverges", policy)});
  }
  if (s > 1.0 && t <= 1.0) {
    const bool single_largest = lambda.eval(2).value() > 0.0;
    std::vector<Condition> conds;
    Condition lam2{"lambda_2_below_one"};
    lam2.mode = Mode::Analytic;
    lam2.value = Condition::Value::True;
    lam2.detail["lambda_2_is_one"] = !single_largest;
    if (!single_largest) conds.push_back(weight_below_one_condition(gamma));
    conds.push_back(divergence_condition(lambda, s, "lambda_log_power_ratio_diverges", policy));
    Verdict v = assemble(notion,
                         single_largest ? "lambda_2 < 1: arbitrary gamma; (log 1/lambda_j)^s / log j -> inf"
                                        : "lambda_2 = 1: some gamma_p < 1 and (log 1/lambda_j)^s / log j -> inf",
                         conds);
    v.evidence.insert(v.evidence.begin(), lam2.diagnostic());
    return v;
  }
  if (s > 1.0 && t > 1.0) {
    return assemble(notion, "arbitrary gamma; (log 1/lambda_j)^s / log j -> inf",
                    {divergence_condition(lambda, s, "lambda_log_power_ratio_diverges", policy)});
  }
  if (s < 1.0 && t > 1.0) {
    const double eta = item10_eta(s, t);
    Verdict v = assemble(notion, "arbitrary gamma; (log 1/lambda_j)^eta / log j -> inf, eta = s(t-1)/(t-s)",
                         {divergence_condition(lambda, eta, "lambda_log_power_ratio_diverges", policy)});
    v.evidence.insert(v.evidence.begin(), Diagnostic{"eta", {{"value", eta}, {"s", s}, {"t", t}}});
    return v;
  }

  // s < 1, t = 1. Necessary: the EXP-WT conditions. Sufficiency rests on a
  // limit over all (d, k, j) nets, which is only probed numerically.
  std::vector<Condition> conds{tends_to_zero_condition(gamma, "gamma_to_zero", false, policy),
                               divergence_condition(lambda, 1.0, "lambda_log_ratio_diverges", policy)};
  Condition nets{"condition_111_nets"};
  for (const auto& [label, kind] : {std::pair{"grow_dimension", Net111::GrowDimension},
                                    std::pair{"grow_index", Net111::GrowIndex}, std::pair{"diagonal", Net111::Diagonal}}) {
    nets.detail[label] = condition_111_check(lambda, gamma, s, net_111(kind, policy.net_size)).to_json();
  }
  conds.push_back(nets);
  return assemble(notion,
                  "EXP-WT conditions (necessary) and ((log 1/gamma_k)^s + (log 1/lambda_j)^s)/(d^(1-s) log j) -> inf",
                  conds);
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw Error(ErrorCode::InvalidArgument, "fit needs at least 3 samples");
  std::vector<double> xs, ys;
  for (const auto& [E, count] : samples) {
    if (!(E > 0.0)) throw Error(ErrorCode::InvalidArgument, "E must be positive");
    if (!(count >= 1.0)) throw Error(ErrorCode::InvalidArgument, "counts must be >= 1");
    xs.push_back(std::log1p(E));
    ys.push_back(std::log(count));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = i + 1; k < xs.size(); ++k) {
      if (xs[i] == xs[k]) throw Error(ErrorCode::InvalidArgument, "E values must be distinct");
    }
  }
  FitResult fit;
  if (std::all_of(samples.begin(), samples.end(), [&](const auto& s) { return s.second == samples.front().second; })) {
    fit.degenerate = true;
    fit.c_hat = samples.front().second;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.p_hat = sxy / sxx;
  const double intercept = my - fit.p_hat * mx;
  fit.c_hat = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.p_hat * xs[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss);
  return fit;
}

}  // namespace exptract
