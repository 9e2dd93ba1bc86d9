#pragma once

#include <optional>

#include "exptract/sequence.hpp"

namespace exptract {

// Leading-order growth of a function of E as E -> infinity:
//   coef * exp(rate * E^exp_pe * (log E)^exp_pl) * E^p * (log E)^q * (log log E)^r * (log log log E)^u
// rate == 0 means no exponential factor. All threshold functions of the
// catalog families fit this shape.
struct Growth {
  double coef = 1.0;
  double rate = 0.0;
  double exp_pe = 0.0;
  double exp_pl = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double u = 0.0;
  bool infinite = false;  // the threshold function itself is +inf (non-compact)

  static Growth constant(double c) {
    Growth g;
    g.coef = c;
    return g;
  }

  bool is_constant() const noexcept { return !infinite && rate == 0.0 && p == 0.0 && q == 0.0 && r == 0.0 && u == 0.0; }
};

Growth operator*(const Growth& a, const Growth& b);
Growth operator/(const Growth& a, const Growth& b);

// Leading term of log f for f -> infinity (or a positive constant).
Growth log_of(const Growth& g);

// lim_{E -> inf} of the represented function; may be +inf or 0.
double limit_of(const Growth& g);

// Growth of #{j : L(j) < 2E}. nullopt without analytic metadata or when the
// family's threshold grows faster than the representable scale.
std::optional<Growth> threshold_growth(const Sequence& seq);

}  // namespace exptract
