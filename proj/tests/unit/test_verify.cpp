#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "exptract/tractability.hpp"
#include "exptract/verify.hpp"

using namespace exptract;
using namespace exptract::family;

namespace {

const double ln2 = std::log(2.0);
EigenSeq dyadic() { return EigenSeq(ExpPower{ln2, 1.0}); }

bool has_check_with(const AuditReport& r, const std::string& value) {
  return std::any_of(r.checks.begin(), r.checks.end(),
                     [&](const AuditCheck& c) { return c.lhs == value || c.rhs == value; });
}

}  // namespace

TEST_CASE("brute_force_count worked examples") {
  CHECK(brute_force_count(dyadic(), WeightSeq(ConstantOne{}), Query(0.5 * std::log(5.0), 2), 10) == 6);
  const WeightSeq halves(Tabulated{{ExtLogMag(ln2), ExtLogMag(2.0 * ln2)}});
  CHECK(brute_force_count(dyadic(), halves, Query(0.5 * std::log(16.0), 2), 8) == 4);
  CHECK(brute_force_count(dyadic(), WeightSeq(ExpPower{1.0, 1.0}, false), Query(0.5, 3), 4) == 1);
}

TEST_CASE("brute_force_count guards") {
  CHECK_THROWS_AS(brute_force_count(dyadic(), WeightSeq(ConstantOne{}), Query(2.0, 2), 3), Error);
  try {
    brute_force_count(dyadic(), WeightSeq(ConstantOne{}), Query(2.0, 2), 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoxTooSmall);
  }
  try {
    brute_force_count(dyadic(), WeightSeq(ConstantOne{}), Query(1.0, 9), 10);
    FAIL("expected guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GuardExceeded);
  }
  // exactly at the guard is fine
  CHECK(brute_force_count(dyadic(), WeightSeq(ConstantOne{}), Query(0.1, 8), 10) == 1);
}

TEST_CASE("check_lemma1 examples") {
  const auto r = check_lemma1(dyadic(), WeightSeq(ExpPower{1.0, 1.0}, false), 1.0, 5);
  CHECK(r.passed());
  CHECK(r.checks.size() >= 2);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.name << " " << c.lhs << " " << c.rhs);

  // j(E) = 1
  const auto one = check_lemma1(dyadic(), WeightSeq(PowerLaw{1.0}), 0.2, 3);
  CHECK(one.passed());
  CHECK(has_check_with(one, "1"));

  const auto ex1 = check_lemma1(EigenSeq(DoubleExpPower{1.0, 1.0}), WeightSeq(DoubleExpPower{1.0, 1.0}, false), 100.0, 10);
  CHECK(ex1.passed());
  CHECK(d_of_eps(WeightSeq(DoubleExpPower{1.0, 1.0}, false), 100.0) == 5);
  CHECK(has_check_with(ex1, "3125"));
  REQUIRE(std::any_of(ex1.checks.begin(), ex1.checks.end(),
                      [](const AuditCheck& c) { return c.name.rfind("dimension_truncation", 0) == 0; }));
}

TEST_CASE("check_lemma1 on every golden family") {
  for (const auto& fam : golden_families()) {
    for (double E : fam.e_grid) {
      for (auto d : fam.d_list) {
        INFO(fam.name << " E=" << E << " d=" << d);
        CHECK(check_lemma1(fam.lambda, fam.gamma, E, d).passed());
      }
    }
  }
  CHECK(golden_families().size() == 6);
}

TEST_CASE("power_sum_split") {
  const auto two = power_sum_split(2.0, {1.0, 1.0});
  CHECK(two.alpha == doctest::Approx(2.0));
  CHECK(two.lower == 1.0);
  CHECK(two.upper == doctest::Approx(2.0));
  CHECK(two.within);
  CHECK(power_sum_split(1.0, {0.3, 7.0, 2.0}).alpha == doctest::Approx(1.0));
  const auto half = power_sum_split(0.5, {1.0, 1.0});
  CHECK(half.alpha == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(half.lower == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(half.within);
  // 0^0 = 1
  CHECK(power_sum_split(0.0, {0.0, 0.0, 5.0}).alpha == doctest::Approx(1.0 / 3.0));
  CHECK(power_sum_split(0.0, {0.0, 0.0, 5.0}).within);
}

TEST_CASE("power_sum_split bounds on random draws") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s_dist(1e-6, 4.0);
  std::uniform_real_distribution<double> a_dist(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = s_dist(rng);
    std::vector<double> a(1 + rng() % 8);
    for (auto& x : a) x = (rng() % 5 == 0) ? 0.0 : a_dist(rng);
    if (std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; })) a[0] = 1.0;
    CHECK(power_sum_split(s, a).within);
  }
}

TEST_CASE("check_lemma2_family") {
  const std::vector<double> cs{2.0, 1.0, 0.5, 0.1};
  const auto grid = ProbePolicy::defaults().j_grid;
  CHECK(check_lemma2_family(EigenSeq(LogPower{2.0}), {0.1, 1.0}, grid).passed());
  const auto p2 = check_lemma2_family(EigenSeq(PowerLaw{2.0}), {1.0, 0.4}, grid);
  CHECK(p2.passed());
  CHECK(p2.checks.size() >= 2);
  CHECK(check_lemma2_family(EigenSeq(PowerLaw{1.0}), {1.0}, grid).passed());
  for (const auto& seq : {EigenSeq(PowerLaw{1.0}), EigenSeq(PowerLaw{2.0}), EigenSeq(LogPower{2.0}),
                          EigenSeq(ExpPower{1.0, 1.0})}) {
    CHECK(check_lemma2_family(seq, cs, grid).passed());
  }
}

TEST_CASE("oracle instances agree and are reproducible") {
  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_oracle_instance(a);
    const auto y = random_oracle_instance(b);
    CHECK(x.query.E == y.query.E);
    CHECK(x.query.d == y.query.d);
    CHECK(x.query.d <= 4);
    const auto c = oracle_check(x, "i" + std::to_string(i));
    CHECK_MESSAGE(c.passed, c.lhs << " vs " << c.rhs);
  }
}

TEST_CASE("AuditReport json") {
  AuditReport r;
  r.instance = "x";
  r.add("a", true, "1", "2");
  r.add("b", false, "3", "2", "why");
  CHECK_FALSE(r.passed());
  const auto j = r.to_json();
  CHECK(j["instance"] == "x");
  CHECK(j["checks"].size() == 2);
}
