#include <doctest.h>

#include <cmath>
#include <limits>

#include "exptract/asymptotics.hpp"
#include "exptract/complexity.hpp"

using namespace exptract;
using namespace exptract::family;

TEST_CASE("growth algebra") {
  Growth a;
  a.p = 1.0;
  Growth b;
  b.q = 2.0;
  const Growth ab = a * b;
  CHECK(ab.p == 1.0);
  CHECK(ab.q == 2.0);
  CHECK(limit_of(ab / ab) == 1.0);
  CHECK(limit_of(b / a) == 0.0);
  CHECK(std::isinf(limit_of(a / b)));
  CHECK(limit_of(Growth::constant(3.5)) == 3.5);
}

TEST_CASE("log_of leading terms") {
  Growth e;  // exp(2E)
  e.rate = 2.0;
  e.exp_pe = 1.0;
  const Growth le = log_of(e);
  CHECK(le.coef == 2.0);
  CHECK(le.p == 1.0);

  Growth poly;  // 3 E^2
  poly.coef = 3.0;
  poly.p = 2.0;
  const Growth lp = log_of(poly);
  CHECK(lp.coef == 2.0);
  CHECK(lp.q == 1.0);

  CHECK(log_of(Growth::constant(std::exp(1.0))).coef == doctest::Approx(1.0));
  Growth inf;
  inf.infinite = true;
  CHECK_THROWS_AS(log_of(inf), Error);
}

TEST_CASE("threshold growth matches the scanned thresholds") {
  // ratio of scanned j(eps) to the leading term tends to 1
  const auto ratio_at = [](const EigenSeq& s, double E) {
    const Growth g = *threshold_growth(s);
    const double lead = g.coef * std::pow(E, g.p) * std::pow(std::log(E), g.q) *
                        std::pow(std::log(std::log(E)), g.r);
    return static_cast<double>(j_of_eps(s, E)) / lead;
  };
  CHECK(ratio_at(EigenSeq(ExpPower{1.0, 1.0}), 1e12) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ratio_at(EigenSeq(ExpPower{0.5, 2.0}), 1e12) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ratio_at(EigenSeq(DoubleExpPower{1.0, 1.0}), 1e300) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("families without a representable growth") {
  CHECK_FALSE(threshold_growth(WeightSeq(InverseLog{})).has_value());
  CHECK_FALSE(threshold_growth(EigenSeq(Tabulated{{ExtLogMag(0.0), ExtLogMag(1.0)}})).has_value());
  CHECK(threshold_growth(WeightSeq(ConstantOne{}))->infinite);
  const WeightSeq ez(EventuallyZero{4, {ExtLogMag(0.0), ExtLogMag(1.0), ExtLogMag(2.0)}});
  CHECK(threshold_growth(ez)->is_constant());
  CHECK(threshold_growth(ez)->coef == 3.0);
}
