#include "exptract/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <variant>

namespace exptract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Growth combine(const Growth& a, const Growth& b, double sign) {
  if (a.infinite || b.infinite) throw Error(ErrorCode::InvalidArgument, "growth algebra on an infinite threshold");
  if (a.rate != 0.0 && b.rate != 0.0 && (a.exp_pe != b.exp_pe || a.exp_pl != b.exp_pl)) {
    throw Error(ErrorCode::InvalidArgument, "growth algebra: mismatched exponential scales");
  }
  Growth g;
  g.coef = sign > 0 ? a.coef * b.coef : a.coef / b.coef;
  g.rate = a.rate + sign * b.rate;
  g.exp_pe = a.rate != 0.0 ? a.exp_pe : b.exp_pe;
  g.exp_pl = a.rate != 0.0 ? a.exp_pl : b.exp_pl;
  if (g.rate == 0.0) g.exp_pe = g.exp_pl = 0.0;
  g.p = a.p + sign * b.p;
  g.q = a.q + sign * b.q;
  g.r = a.r + sign * b.r;
  g.u = a.u + sign * b.u;
  return g;
}

}  // namespace

Growth operator*(const Growth& a, const Growth& b) { return combine(a, b, 1.0); }
Growth operator/(const Growth& a, const Growth& b) { return combine(a, b, -1.0); }

Growth log_of(const Growth& g) {
  if (g.infinite) throw Error(ErrorCode::InvalidArgument, "log of an infinite threshold");
  Growth out;
  if (g.rate > 0.0 && (g.exp_pe > 0.0 || (g.exp_pe == 0.0 && g.exp_pl > 0.0))) {
    out.coef = g.rate;
    out.p = g.exp_pe;
    out.q = g.exp_pl;
  } else if (g.p > 0.0) {
    out.coef = g.p;
    out.q = 1.0;
  } else if (g.q > 0.0) {
    out.coef = g.q;
    out.r = 1.0;
  } else if (g.r > 0.0) {
    out.coef = g.r;
    out.u = 1.0;
  } else if (g.is_constant() && g.coef > 0.0) {
    out.coef = std::log(g.coef);
  } else {
    throw Error(ErrorCode::InvalidArgument, "log of a growth outside the representable scale");
  }
  return out;
}

double limit_of(const Growth& g) {
  if (g.infinite) return kInf;
  if (g.coef == 0.0) return 0.0;
  const auto decide = [&](double e) { return e > 0.0 ? kInf : 0.0; };
  if (g.rate != 0.0) return decide(g.rate);
  for (double e : {g.p, g.q, g.r, g.u}) {
    if (e != 0.0) return decide(e);
  }
  return g.coef;
}

std::optional<Growth> threshold_growth(const Sequence& seq) {
  if (!seq.has_analytic()) return std::nullopt;
  return std::visit(
      [](const auto& f) -> std::optional<Growth> {
        using F = std::decay_t<decltype(f)>;
        Growth g;
        if constexpr (std::is_same_v<F, family::PowerLaw>) {
          // a log j < 2E  =>  j ~ exp(2E / a)
          g.rate = 2.0 / f.a;
          g.exp_pe = 1.0;
        } else if constexpr (std::is_same_v<F, family::ExpPower>) {
          g.coef = std::pow(2.0 / f.alpha, 1.0 / f.beta);
          g.p = 1.0 / f.beta;
        } else if constexpr (std::is_same_v<F, family::DoubleExpPower>) {
          g.coef = std::pow(f.alpha, -1.0 / f.beta);
          g.q = 1.0 / f.beta;
        } else if constexpr (std::is_same_v<F, family::TripleExp>) {
          g.coef = 1.0 / f.alpha;
          g.r = 1.0;
        } else if constexpr (std::is_same_v<F, family::LogPower>) {
          g.rate = std::pow(2.0, 1.0 / f.beta);
          g.exp_pe = 1.0 / f.beta;
        } else if constexpr (std::is_same_v<F, family::IterLog>) {
          // x log x = 2E with x = log j  =>  log j ~ 2E / log E
          g.rate = 2.0;
          g.exp_pe = 1.0;
          g.exp_pl = -1.0;
        } else if constexpr (std::is_same_v<F, family::ConstantOne>) {
          g.infinite = true;
        } else if constexpr (std::is_same_v<F, family::EventuallyZero>) {
          g = Growth::constant(static_cast<double>(f.j_star - 1));
        } else {
          // InverseLog grows like exp(exp(2E)); Tabulated has no asymptotics.
          return std::nullopt;
        }
        return g;
      },
      seq.family());
}

}  // namespace exptract
