#include <doctest.h>

#include <cmath>
#include <limits>

#include "exptract/tractability.hpp"

using namespace exptract;
using namespace exptract::family;

namespace {

const double ln2 = std::log(2.0);
const double kInf = std::numeric_limits<double>::infinity();

EigenSeq dexp(double a, double b) { return EigenSeq(DoubleExpPower{a, b}); }
WeightSeq dexp_w(double a, double b) { return WeightSeq(DoubleExpPower{a, b}, false); }

}  // namespace

TEST_CASE("notion names and parsing") {
  CHECK(Notion::parse("EXP-SPT").kind == Notion::Kind::ExpSpt);
  CHECK(Notion::parse("EXP-(s,t)-WT", 0.5, 2.0).name() == "EXP-(0.5,2)-WT");
  CHECK_THROWS_AS(Notion::parse("ALG-PT"), Error);
}

TEST_CASE("trend classification") {
  CHECK(classify_trend({1, 2, 3}) == Trend::Increasing);
  CHECK(classify_trend({3, 2, 2}) == Trend::Decreasing);
  CHECK(classify_trend({1, 1, 1}) == Trend::Flat);
  CHECK(classify_trend({1, 3, 2}) == Trend::Oscillating);
  CHECK(classify_trend({1, kInf, kInf}) == Trend::Increasing);
}

TEST_CASE("b_spt_estimate on the triple-exponential weights") {
  const auto est = b_spt_estimate(dexp(1, 1), WeightSeq(TripleExp{1.0}, false), {1e3, 1e6, 1e12, 1e100, 1e300});
  REQUIRE(est.probes.size() == 5);
  CHECK(est.trend == Trend::Decreasing);
  CHECK(est.probes.back().ratio == doctest::Approx(6.0 * std::log(691.0) / std::log(1e300)).epsilon(1e-12));
  CHECK(est.probes.back().ratio < 0.06);
  CHECK(est.tail_sup >= est.probes.back().ratio);
}

TEST_CASE("b_spt_estimate grows for exponential eigenvalues") {
  const auto est = b_spt_estimate(EigenSeq(ExpPower{1.0, 1.0}), dexp_w(1, 1), {1e3, 1e6});
  CHECK(est.trend == Trend::Increasing);
  CHECK(est.probes[0].ratio == doctest::Approx(7.70).epsilon(1e-3));
  CHECK(est.probes[1].ratio == doctest::Approx(14.7).epsilon(1e-3));
}

TEST_CASE("b_spt_estimate: j = 1 everywhere gives zero ratios") {
  const EigenSeq steep(Tabulated{{ExtLogMag(0.0), ExtLogMag(1e9)}});
  const auto est = b_spt_estimate(steep, WeightSeq(PowerLaw{1.0}), {2.0, 5.0, 10.0});
  for (const auto& p : est.probes) CHECK(p.ratio == 0.0);
  CHECK(est.tail_sup == 0.0);
  CHECK_THROWS_AS(b_spt_estimate(steep, WeightSeq(PowerLaw{1.0}), {10.0, 5.0}), Error);
  CHECK_THROWS_AS(b_spt_estimate(steep, WeightSeq(PowerLaw{1.0}), {0.5}), Error);
}

TEST_CASE("b_spt_estimate skips d = 0 probes") {
  const WeightSeq heavy(Tabulated{{ExtLogMag(30.0), ExtLogMag(40.0)}});
  const auto est = b_spt_estimate(dexp(1, 1), heavy, {10.0, 100.0});
  CHECK(est.probes.size() == 1);
  CHECK(est.skipped.size() == 1);
}

TEST_CASE("b_qpt_estimate") {
  const auto est = b_qpt_estimate(dexp(1, 1), dexp_w(1, 1), {1e100});
  REQUIRE(est.probes.size() == 1);
  CHECK(est.probes[0].ratio == doctest::Approx(230.0 / std::log(1e100)).epsilon(1e-12));
  CHECK(est.probes[0].ratio == doctest::Approx(0.999).epsilon(1e-3));
  const auto intro = b_qpt_estimate(dexp(1, 1), WeightSeq(TripleExp{1.0}, false), double_exponential_grid(10, 8));
  CHECK(intro.trend == Trend::Decreasing);
}

TEST_CASE("divergence_check") {
  const auto grid = ProbePolicy::defaults().j_grid;
  const auto p3 = divergence_check(EigenSeq(PowerLaw{3.0}), 1.0, grid);
  CHECK(p3.kind == DivergenceReport::Kind::Bounded);
  CHECK(p3.limit == 3.0);
  for (const auto& pr : p3.evidence.probes) CHECK(pr.ratio == doctest::Approx(3.0));
  CHECK(divergence_check(EigenSeq(LogPower{2.0}), 1.0, grid).kind == DivergenceReport::Kind::Diverges);
  CHECK(divergence_check(EigenSeq::iter_log(), 1.0, grid).kind == DivergenceReport::Kind::Diverges);

  const auto numeric = divergence_check(EigenSeq(LogPower{2.0}).without_analytic(), 1.0, grid);
  CHECK(numeric.kind == DivergenceReport::Kind::Inconclusive);
  CHECK(numeric.mode == Mode::Numeric);
  CHECK(numeric.evidence.trend == Trend::Increasing);
  CHECK_THROWS_AS(divergence_check(EigenSeq(PowerLaw{3.0}), 1.0, {1, 10}), Error);
}

TEST_CASE("summability") {
  const auto r = summability(EigenSeq(PowerLaw{2.0}), 1.0, 1000000);
  REQUIRE(r.tail_bound.has_value());
  CHECK(*r.tail_bound < 1e-6);
  const double zeta2 = M_PI * M_PI / 6.0;
  CHECK(r.partial <= zeta2);
  CHECK(r.partial + *r.tail_bound >= zeta2);
  CHECK(r.partial == doctest::Approx(zeta2).epsilon(1e-6));

  CHECK(summability(EigenSeq(ExpPower{1.0, 1.0}), 200.0, 100).partial == doctest::Approx(1.0));
  CHECK_THROWS_AS(summability(EigenSeq(PowerLaw{1.0}), 1.0, 100), Error);
  CHECK_THROWS_AS(summability(EigenSeq(PowerLaw{2.0}), 0.4, 100), Error);

  // exp(-(j-1)): geometric series 1 / (1 - e^-1)
  const auto g = summability_adaptive(EigenSeq(ExpPower{1.0, 1.0}), 1.0);
  CHECK(g.partial + *g.tail_bound == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-12));
  const auto lp = summability_adaptive(EigenSeq(LogPower{2.0}), 0.5);
  CHECK(lp.tail_bound.has_value());
  const auto sub = summability_adaptive(EigenSeq(ExpPower{1.0, 0.5}), 1.0);
  REQUIRE(sub.tail_bound.has_value());
  CHECK(*sub.tail_bound < 1e-9 * sub.partial);
}

TEST_CASE("condwt3_sup") {
  const EigenSeq dy(ExpPower{ln2, 1.0});
  const auto flat = condwt3_sup(dy, WeightSeq(ConstantOne{}), 0.1, 1.0, 200);
  CHECK(flat.m_star == doctest::Approx(std::pow(2.0, -0.1) / (1.0 - std::pow(2.0, -0.1))).epsilon(1e-9));
  CHECK(flat.growing);
  CHECK(flat.argmax == 200);
  CHECK(flat.sup == doctest::Approx(200.0 * (std::log1p(flat.m_star) - 0.1)).epsilon(1e-9));

  const auto decaying = condwt3_sup(dy, WeightSeq(ExpPower{1.0, 1.0}, false), 0.1, 1.0, 500);
  CHECK_FALSE(decaying.growing);
  CHECK(decaying.argmax < 100);

  const auto big_c = condwt3_sup(dy, WeightSeq(ConstantOne{}), 8.0, 1.0, 50);
  CHECK(big_c.argmax == 1);
  CHECK_FALSE(big_c.growing);
}

TEST_CASE("condition (111) ratio along nets") {
  std::vector<Triple> triples;
  for (std::uint64_t d = 2; d <= 1u << 20; d *= 4) triples.push_back({d, 1, d});
  const auto est = condition_111_check(EigenSeq(PowerLaw{2.0}), WeightSeq(ConstantOne{}), 0.5, triples);
  CHECK(est.trend == Trend::Decreasing);
  const double d = static_cast<double>(triples.back().d);
  CHECK(est.probes.back().ratio == doctest::Approx(std::sqrt(2.0 * std::log(d)) / (std::sqrt(d) * std::log(d))));

  const auto sat = condition_111_check(EigenSeq(TripleExp{1.0}), WeightSeq(ConstantOne{}), 0.5, net_111(Net111::GrowIndex, 6));
  CHECK(std::isinf(sat.probes.back().ratio));

  // d = k = 1, LogPower: ratio (log j)^(s beta - 1)
  const auto lp = condition_111_check(EigenSeq(LogPower{3.0}), WeightSeq(ConstantOne{}), 0.5, net_111(Net111::GrowIndex, 20));
  CHECK(lp.trend == Trend::Increasing);
  CHECK_THROWS_AS(condition_111_check(EigenSeq(LogPower{3.0}), WeightSeq(ConstantOne{}), 1.0, triples), Error);
}

TEST_CASE("lemma4_ratio") {
  const EigenSeq flat2(Tabulated{{ExtLogMag(0.0), ExtLogMag(0.0), ExtLogMag(1.0)}});
  for (std::uint64_t d : {1u, 10u, 100u}) {
    const std::vector<std::uint64_t> k(d, 2);
    CHECK(lemma4_ratio(flat2, WeightSeq(ConstantOne{}), 2.0, 1.0, d, k) == doctest::Approx(1.0 / ln2));
  }
  const EigenSeq dy(ExpPower{ln2, 1.0});
  const WeightSeq ek(ExpPower{1.0, 1.0}, false);
  CHECK(lemma4_ratio(dy, ek, 1.0, 1.0, 10, std::vector<std::uint64_t>(10, 2)) ==
        doctest::Approx((10.0 + 55.0 + 10.0 * ln2) / (10.0 * ln2)));
  CHECK(lemma4_ratio(dy, ek, 0.5, 1.0, 1, {2}) == doctest::Approx((1.0 + 1.0 + std::sqrt(ln2)) / ln2));
  CHECK_THROWS_AS(lemma4_ratio(dy, ek, 1.0, 1.0, 2, {2}), Error);
}

TEST_CASE("eta exponent") {
  CHECK(item10_eta(0.5, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(item10_eta(0.25, 3.0) == doctest::Approx(0.25 * 2.0 / 2.75));
  CHECK_THROWS_AS(item10_eta(1.0, 2.0), Error);
}

TEST_CASE("classify worked examples") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double beta : {1.5, 2.0, 3.0}) {
      const Verdict v = classify(dexp(alpha, 1.0), dexp_w(1.0, beta), Notion::spt());
      CHECK(v.status == Verdict::Status::Holds);
      CHECK(v.mode == Mode::Analytic);
      CHECK(v.exponent.value() == 0.0);
    }
  }
  const Verdict q = classify(dexp(1, 1), dexp_w(1, 1), Notion::qpt());
  CHECK(q.status == Verdict::Status::Holds);
  CHECK(q.exponent.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(classify(dexp(1, 1), dexp_w(1, 1), Notion::spt()).status == Verdict::Status::Fails);
  CHECK(classify(dexp(1, 1), dexp_w(1, 1), Notion::pt()).status == Verdict::Status::Fails);

  const Verdict wt = classify(EigenSeq::iter_log(), WeightSeq(InverseLog{}), Notion::wt());
  CHECK(wt.status == Verdict::Status::Holds);
  CHECK(wt.mode == Mode::Analytic);

  const EigenSeq lam2_one(IterLog{{ExtLogMag(0.0), ExtLogMag(0.0)}});
  const Verdict f = classify(lam2_one, WeightSeq(ConstantOne{}), Notion::st_wt(2.0, 1.0));
  CHECK(f.status == Verdict::Status::Fails);
  CHECK(f.mode == Mode::Analytic);
  REQUIRE(f.find("exists_gamma_p_below_one") != nullptr);

  // with a weight below one the same eigenvalues pass
  CHECK(classify(lam2_one, WeightSeq(ExpPower{1.0, 1.0}), Notion::st_wt(2.0, 1.0)).status == Verdict::Status::Holds);
}

TEST_CASE("classify rejects unsupported notions") {
  CHECK_THROWS_AS(classify(dexp(1, 1), dexp_w(1, 1), Notion::st_wt(0.5, 0.5)), Error);
  CHECK_THROWS_AS(classify(dexp(1, 1), dexp_w(1, 1), Notion{Notion::Kind::ExpUwt}), Error);
}

TEST_CASE("classify dispatch over (s, t)") {
  const EigenSeq pl(PowerLaw{2.0});
  const WeightSeq ones(ConstantOne{});
  // polynomial eigenvalues never satisfy the log-ratio divergence with s = 1
  CHECK(classify(pl, WeightSeq(ExpPower{1.0, 1.0}), Notion::wt()).status == Verdict::Status::Fails);
  CHECK(classify(pl, ones, Notion::st_wt(1.0, 2.0)).status == Verdict::Status::Fails);
  CHECK(classify(pl, ones, Notion::st_wt(2.0, 2.0)).status == Verdict::Status::Holds);
  CHECK(classify(EigenSeq(LogPower{2.0}), ones, Notion::st_wt(1.0, 2.0)).status == Verdict::Status::Holds);
  // s < 1 < t uses eta = s(t-1)/(t-s): LogPower(2) with eta = 1/3 gives (log j)^(-1/3) -> bounded
  const Verdict eta = classify(EigenSeq(LogPower{2.0}), ones, Notion::st_wt(0.5, 2.0));
  CHECK(eta.status == Verdict::Status::Fails);
  CHECK(classify(EigenSeq(LogPower{4.0}), ones, Notion::st_wt(0.5, 2.0)).status == Verdict::Status::Holds);
  // s = 1, t < 1 needs both log ratios to diverge
  CHECK(classify(dexp(1, 1), WeightSeq(PowerLaw{1.0}), Notion::st_wt(1.0, 0.5)).status == Verdict::Status::Fails);
  CHECK(classify(dexp(1, 1), WeightSeq(ExpPower{1.0, 1.0}), Notion::st_wt(1.0, 0.5)).status == Verdict::Status::Holds);
  // s < 1, t = 1: necessary conditions fail outright, otherwise only numeric evidence
  CHECK(classify(pl, ones, Notion::st_wt(0.5, 1.0)).status == Verdict::Status::Fails);
  ProbePolicy small = ProbePolicy::defaults();
  small.net_size = 10;
  const Verdict open = classify(dexp(1, 1), dexp_w(1, 1), Notion::st_wt(0.5, 1.0), small);
  CHECK(open.status == Verdict::Status::Inconclusive);
  CHECK(open.mode == Mode::Numeric);
  CHECK(open.find("condition_111_nets") != nullptr);
}

TEST_CASE("tabulated inputs stay numeric") {
  const EigenSeq tab(Tabulated{{ExtLogMag(0.0), ExtLogMag(1.0), ExtLogMag(5.0), ExtLogMag(20.0)}});
  const Verdict v = classify(tab, WeightSeq(ExpPower{1.0, 1.0}), Notion::wt());
  CHECK(v.status == Verdict::Status::Inconclusive);
  CHECK(v.mode == Mode::Numeric);
  ProbePolicy promote = ProbePolicy::defaults();
  promote.promote_numeric = true;
  const Verdict p = classify(EigenSeq(LogPower{2.0}).without_analytic(), WeightSeq(ExpPower{1.0, 1.0}), Notion::wt(), promote);
  CHECK(p.status == Verdict::Status::Holds);
  CHECK(p.mode == Mode::Numeric);
}

TEST_CASE("zero-weight tail: QPT follows SPT") {
  const WeightSeq ez(EventuallyZero{3, {ExtLogMag(0.0), ExtLogMag(0.5)}});
  const Verdict s = classify(EigenSeq(ExpPower{1.0, 1.0}), ez, Notion::spt());
  CHECK(s.status == Verdict::Status::Holds);
  CHECK(s.exponent.value() == doctest::Approx(2.0));
  const Verdict q = classify(EigenSeq(ExpPower{1.0, 1.0}), ez, Notion::qpt());
  CHECK(q.status == Verdict::Status::Holds);
}

TEST_CASE("verdict coherence: SPT implies QPT implies WT") {
  const std::vector<std::pair<EigenSeq, WeightSeq>> fams{
      {dexp(1, 1), dexp_w(1, 2)}, {dexp(1, 1), dexp_w(1, 1)}, {dexp(1, 1), WeightSeq(TripleExp{1.0}, false)},
      {EigenSeq::iter_log(), WeightSeq(InverseLog{})}, {EigenSeq(ExpPower{1.0, 1.0}), dexp_w(1, 1)}};
  for (const auto& [l, g] : fams) {
    const auto spt = classify(l, g, Notion::spt()).status;
    const auto qpt = classify(l, g, Notion::qpt()).status;
    const auto wt = classify(l, g, Notion::wt()).status;
    if (spt == Verdict::Status::Holds) CHECK(qpt == Verdict::Status::Holds);
    if (qpt == Verdict::Status::Holds) CHECK(wt == Verdict::Status::Holds);
    // monotone in (s, t)
    for (double s : {1.0, 1.5, 2.0}) {
      for (double t : {1.0, 1.5, 2.0}) {
        if (classify(l, g, Notion::st_wt(s, t)).status == Verdict::Status::Holds) {
          CHECK(classify(l, g, Notion::st_wt(s + 0.5, t)).status == Verdict::Status::Holds);
          CHECK(classify(l, g, Notion::st_wt(s, t + 0.5)).status == Verdict::Status::Holds);
        }
      }
    }
  }
}

TEST_CASE("fit_exponent") {
  std::vector<std::pair<double, double>> samples;
  for (double E : {10.0, 100.0, 1000.0}) samples.emplace_back(E, std::round((1 + E) * (1 + E)));
  const auto fit = fit_exponent(samples);
  CHECK(fit.p_hat == doctest::Approx(2.0).epsilon(0.025));
  CHECK_FALSE(fit.degenerate);
  const auto flat = fit_exponent({{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}});
  CHECK(flat.degenerate);
  CHECK(flat.p_hat == 0.0);
  CHECK_THROWS_AS(fit_exponent({{1.0, 1.0}, {2.0, 1.0}}), Error);
  CHECK_THROWS_AS(fit_exponent({{1.0, 1.0}, {1.0, 2.0}, {3.0, 1.0}}), Error);
}

TEST_CASE("probe-wise B_QPT <= B_SPT / log 2 where d(E) >= 2") {
  const std::vector<double> grid{10.0, 1e3, 1e6, 1e12, 1e24};
  const std::vector<std::pair<EigenSeq, WeightSeq>> fams{
      {dexp(1, 1), dexp_w(1, 1)}, {dexp(1, 1), dexp_w(1, 2)}, {dexp(1, 1), WeightSeq(TripleExp{1.0}, false)}};
  for (const auto& [l, g] : fams) {
    const auto spt = b_spt_estimate(l, g, grid);
    const auto qpt = b_qpt_estimate(l, g, grid);
    for (const auto& q : qpt.probes) {
      for (const auto& s : spt.probes) {
        if (s.x == q.x) CHECK(q.ratio <= s.ratio / ln2 * (1 + 1e-12));
      }
    }
  }
}
