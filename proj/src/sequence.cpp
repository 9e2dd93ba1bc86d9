#include "exptract/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace exptract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// NaN only arises from inf - inf after overflow; both sides are "huge".
ExtLogMag saturate(double v) {
  if (std::isnan(v)) return ExtLogMag::infinity();
  return ExtLogMag(v < 0.0 ? 0.0 : v);
}

void require_param(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidSequence, std::string("parameter ") + name + " must be positive and finite");
  }
}

void require_monotone(const std::vector<ExtLogMag>& values, const char* what) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) {
      throw Error(ErrorCode::InvalidSequence,
                  std::string(what) + " is not monotone at index " + std::to_string(i + 1));
    }
  }
}

double iter_log_tail(double j) { return std::log(j) * std::log(std::log(j)); }

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::NonCompact: return "NonCompact";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::UnsupportedNotion: return "UnsupportedNotion";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::GuardExceeded: return "GuardExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string family_name(const Family& f) {
  return std::visit(overloaded{
                        [](const family::Tabulated&) { return std::string("Tabulated"); },
                        [](const family::PowerLaw&) { return std::string("PowerLaw"); },
                        [](const family::ExpPower&) { return std::string("ExpPower"); },
                        [](const family::DoubleExpPower&) { return std::string("DoubleExpPower"); },
                        [](const family::TripleExp&) { return std::string("TripleExp"); },
                        [](const family::LogPower&) { return std::string("LogPower"); },
                        [](const family::IterLog&) { return std::string("IterLog"); },
                        [](const family::ConstantOne&) { return std::string("ConstantOne"); },
                        [](const family::InverseLog&) { return std::string("InverseLog"); },
                        [](const family::EventuallyZero&) { return std::string("EventuallyZero"); },
                    },
                    f);
}

Sequence::Sequence(Family family, bool normalize) : family_(std::move(family)), normalized_(normalize) {
  std::visit(overloaded{
                 [](const family::Tabulated& t) { require_monotone(t.values, "tabulated sequence"); },
                 [](const family::PowerLaw& p) { require_param(p.a, "a"); },
                 [](const family::ExpPower& p) {
                   require_param(p.alpha, "alpha");
                   require_param(p.beta, "beta");
                 },
                 [](const family::DoubleExpPower& p) {
                   require_param(p.alpha, "alpha");
                   require_param(p.beta, "beta");
                   if (!std::isfinite(std::exp(p.alpha))) {
                     throw Error(ErrorCode::InvalidSequence, "DoubleExpPower alpha too large: exp(alpha) overflows");
                   }
                 },
                 [](const family::TripleExp& p) {
                   require_param(p.alpha, "alpha");
                   if (!std::isfinite(std::exp(std::exp(p.alpha)))) {
                     throw Error(ErrorCode::InvalidSequence, "TripleExp alpha too large: exp(exp(alpha)) overflows");
                   }
                 },
                 [](const family::LogPower& p) {
                   require_param(p.beta, "beta");
                   if (!(p.beta > 1.0)) throw Error(ErrorCode::InvalidSequence, "LogPower requires beta > 1");
                 },
                 [](const family::IterLog& p) {
                   if (p.prefix.size() < 2) {
                     throw Error(ErrorCode::InvalidSequence, "IterLog prefix needs at least two entries");
                   }
                   require_monotone(p.prefix, "IterLog prefix");
                   const double next = static_cast<double>(p.prefix.size() + 1);
                   if (p.prefix.back().value() > iter_log_tail(next)) {
                     throw Error(ErrorCode::InvalidSequence, "IterLog prefix exceeds the j^(-log log j) tail");
                   }
                 },
                 [](const family::ConstantOne&) {},
                 [](const family::InverseLog&) {},
                 [](const family::EventuallyZero& p) {
                   if (p.j_star < 1) throw Error(ErrorCode::InvalidSequence, "EventuallyZero needs j_star >= 1");
                   if (p.prefix.size() != p.j_star - 1) {
                     throw Error(ErrorCode::InvalidSequence, "EventuallyZero prefix must hold j_star - 1 entries");
                   }
                   require_monotone(p.prefix, "EventuallyZero prefix");
                   for (const auto& v : p.prefix) {
                     if (v.is_infinite()) {
                       throw Error(ErrorCode::InvalidSequence, "EventuallyZero prefix entries must be positive weights");
                     }
                   }
                 },
             },
             family_);
  analytic_ = !std::holds_alternative<family::Tabulated>(family_);
}

ExtLogMag Sequence::eval(std::uint64_t j) const {
  if (j == 0) throw Error(ErrorCode::InvalidIndex, "indices start at 1");
  const double x = static_cast<double>(j);
  return std::visit(
      overloaded{
          [&](const family::Tabulated& t) {
            return j <= t.values.size() ? t.values[j - 1] : ExtLogMag::infinity();
          },
          [&](const family::PowerLaw& p) { return saturate(p.a * std::log(x)); },
          [&](const family::ExpPower& p) {
            return saturate(normalized_ ? p.alpha * (std::pow(x, p.beta) - 1.0) : p.alpha * std::pow(x, p.beta));
          },
          [&](const family::DoubleExpPower& p) {
            if (!normalized_) return saturate(std::exp(p.alpha * std::pow(x, p.beta)));
            if (j == 1) return ExtLogMag();
            // exp(a j^b) - exp(a) = exp(a) * expm1(a (j^b - 1))
            return saturate(std::exp(p.alpha) * std::expm1(p.alpha * (std::pow(x, p.beta) - 1.0)));
          },
          [&](const family::TripleExp& p) {
            if (!normalized_) return saturate(std::exp(std::exp(p.alpha * x)));
            if (j == 1) return ExtLogMag();
            const double inner = std::exp(p.alpha) * std::expm1(p.alpha * (x - 1.0));
            return saturate(std::exp(std::exp(p.alpha)) * std::expm1(inner));
          },
          [&](const family::LogPower& p) { return saturate(std::pow(std::log(x), p.beta)); },
          [&](const family::IterLog& p) {
            return j <= p.prefix.size() ? p.prefix[j - 1] : saturate(iter_log_tail(x));
          },
          [&](const family::ConstantOne&) { return ExtLogMag(); },
          [&](const family::InverseLog&) { return saturate(std::log(std::log(x + 2.0))); },
          [&](const family::EventuallyZero& p) {
            return j < p.j_star ? p.prefix[j - 1] : ExtLogMag::infinity();
          },
      },
      family_);
}

std::optional<double> Sequence::threshold_bound(double budget) const {
  if (!analytic_) return std::nullopt;
  const bool norm = normalized_;
  return std::visit(
      overloaded{
          [](const family::Tabulated&) -> std::optional<double> { return std::nullopt; },
          [&](const family::PowerLaw& p) -> std::optional<double> { return std::exp(budget / p.a); },
          [&](const family::ExpPower& p) -> std::optional<double> {
            const double base = norm ? budget / p.alpha + 1.0 : budget / p.alpha;
            return std::pow(std::max(base, 0.0), 1.0 / p.beta);
          },
          [&](const family::DoubleExpPower& p) -> std::optional<double> {
            // exp(a j^b) < budget + exp(a)  <=>  j^b < 1 + log1p(budget e^-a) / a
            const double base = norm ? 1.0 + std::log1p(budget * std::exp(-p.alpha)) / p.alpha
                                     : std::log(budget) / p.alpha;
            return std::pow(std::max(base, 0.0), 1.0 / p.beta);
          },
          [&](const family::TripleExp& p) -> std::optional<double> {
            const double ea = std::exp(p.alpha);
            const double outer = norm ? ea + std::log1p(budget * std::exp(-ea)) : std::log(budget);
            if (!(outer > 0.0)) return 0.0;
            return std::max(std::log(outer) / p.alpha, 0.0);
          },
          [&](const family::LogPower& p) -> std::optional<double> {
            return std::exp(std::pow(budget, 1.0 / p.beta));
          },
          [](const family::IterLog&) -> std::optional<double> { return std::nullopt; },
          [](const family::ConstantOne&) -> std::optional<double> { return kInf; },
          [&](const family::InverseLog&) -> std::optional<double> { return std::exp(std::exp(budget)) - 2.0; },
          [](const family::EventuallyZero&) -> std::optional<double> { return std::nullopt; },
      },
      family_);
}

std::optional<DivergenceClass> Sequence::divergence_class(double s) const {
  if (!analytic_) return std::nullopt;
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "divergence exponent s must be positive");
  return std::visit(
      overloaded{
          [](const family::Tabulated&) -> std::optional<DivergenceClass> { return std::nullopt; },
          // (a log j)^s / log j = a^s (log j)^(s-1)
          [&](const family::PowerLaw& p) -> std::optional<DivergenceClass> {
            if (s > 1.0) return DivergenceClass::diverges();
            return DivergenceClass::bounded(s == 1.0 ? p.a : 0.0);
          },
          [](const family::ExpPower&) -> std::optional<DivergenceClass> { return DivergenceClass::diverges(); },
          [](const family::DoubleExpPower&) -> std::optional<DivergenceClass> {
            return DivergenceClass::diverges();
          },
          [](const family::TripleExp&) -> std::optional<DivergenceClass> { return DivergenceClass::diverges(); },
          // (log j)^(s beta - 1)
          [&](const family::LogPower& p) -> std::optional<DivergenceClass> {
            const double e = s * p.beta;
            if (e > 1.0) return DivergenceClass::diverges();
            return DivergenceClass::bounded(e == 1.0 ? 1.0 : 0.0);
          },
          // (log j)^(s-1) (log log j)^s
          [&](const family::IterLog&) -> std::optional<DivergenceClass> {
            if (s >= 1.0) return DivergenceClass::diverges();
            return DivergenceClass::bounded(0.0);
          },
          [](const family::ConstantOne&) -> std::optional<DivergenceClass> { return DivergenceClass::bounded(0.0); },
          // (log log (j+2))^s / log j
          [](const family::InverseLog&) -> std::optional<DivergenceClass> { return DivergenceClass::bounded(0.0); },
          [](const family::EventuallyZero&) -> std::optional<DivergenceClass> {
            return DivergenceClass::diverges();
          },
      },
      family_);
}

std::optional<bool> Sequence::tends_to_zero() const {
  if (!analytic_) return std::nullopt;
  if (std::holds_alternative<family::Tabulated>(family_)) return std::nullopt;
  return !std::holds_alternative<family::ConstantOne>(family_);
}

namespace {

nlohmann::json values_to_json(const std::vector<ExtLogMag>& values) {
  auto arr = nlohmann::json::array();
  for (const auto& v : values) {
    if (v.is_infinite()) {
      arr.push_back("inf");
    } else {
      arr.push_back(v.value());
    }
  }
  return arr;
}

std::vector<ExtLogMag> values_from_json(const nlohmann::json& arr, const char* key) {
  if (!arr.is_array()) throw Error(ErrorCode::ConfigError, std::string(key) + " must be an array");
  std::vector<ExtLogMag> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) {
      out.push_back(ExtLogMag::infinity());
    } else if (v.is_number()) {
      out.emplace_back(v.get<double>());
    } else {
      throw Error(ErrorCode::ConfigError, std::string(key) + " entries must be numbers or \"inf\"");
    }
  }
  return out;
}

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::ConfigError, std::string("family descriptor needs numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

Family family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw Error(ErrorCode::ConfigError, "family descriptor needs a string field 'family'");
  }
  const auto name = j.at("family").get<std::string>();
  if (name == "Tabulated") {
    if (j.contains("file")) return family::Tabulated{read_table_file(j.at("file").get<std::string>())};
    return family::Tabulated{values_from_json(j.value("values", nlohmann::json::array()), "values")};
  }
  if (name == "PowerLaw") return family::PowerLaw{number_field(j, "a")};
  if (name == "ExpPower") return family::ExpPower{number_field(j, "alpha"), number_field(j, "beta")};
  if (name == "DoubleExpPower") return family::DoubleExpPower{number_field(j, "alpha"), number_field(j, "beta")};
  if (name == "TripleExp") return family::TripleExp{number_field(j, "alpha")};
  if (name == "LogPower") return family::LogPower{number_field(j, "beta")};
  if (name == "IterLog") {
    if (!j.contains("prefix")) return family::IterLog{{ExtLogMag(), ExtLogMag(-std::log(0.95))}};
    return family::IterLog{values_from_json(j.at("prefix"), "prefix")};
  }
  if (name == "ConstantOne") return family::ConstantOne{};
  if (name == "InverseLog") return family::InverseLog{};
  if (name == "EventuallyZero") {
    const double js = number_field(j, "j_star");
    if (js < 1 || js != std::floor(js)) throw Error(ErrorCode::ConfigError, "j_star must be a positive integer");
    return family::EventuallyZero{static_cast<std::uint64_t>(js),
                                  values_from_json(j.value("prefix", nlohmann::json::array()), "prefix")};
  }
  throw Error(ErrorCode::ConfigError, "unknown family '" + name + "'");
}

}  // namespace

nlohmann::json Sequence::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  std::visit(overloaded{
                 [&](const family::Tabulated& t) { j["values"] = values_to_json(t.values); },
                 [&](const family::PowerLaw& p) { j["a"] = p.a; },
                 [&](const family::ExpPower& p) {
                   j["alpha"] = p.alpha;
                   j["beta"] = p.beta;
                 },
                 [&](const family::DoubleExpPower& p) {
                   j["alpha"] = p.alpha;
                   j["beta"] = p.beta;
                 },
                 [&](const family::TripleExp& p) { j["alpha"] = p.alpha; },
                 [&](const family::LogPower& p) { j["beta"] = p.beta; },
                 [&](const family::IterLog& p) { j["prefix"] = values_to_json(p.prefix); },
                 [](const family::ConstantOne&) {},
                 [](const family::InverseLog&) {},
                 [&](const family::EventuallyZero& p) {
                   j["j_star"] = p.j_star;
                   j["prefix"] = values_to_json(p.prefix);
                 },
             },
             family_);
  if (!normalized_) j["normalize"] = false;
  if (!analytic_ && !std::holds_alternative<family::Tabulated>(family_)) j["analytic"] = false;
  return j;
}

EigenSeq::EigenSeq(Family family) : Sequence(std::move(family), true) {
  if (std::holds_alternative<family::ConstantOne>(family_) || std::holds_alternative<family::InverseLog>(family_) ||
      std::holds_alternative<family::EventuallyZero>(family_)) {
    throw Error(ErrorCode::InvalidSequence, family_name(family_) + " is a weight-only family");
  }
  if (const auto* t = std::get_if<family::Tabulated>(&family_); t && t->values.size() < 2) {
    throw Error(ErrorCode::InvalidSequence, "tabulated eigenvalues need at least lambda_1 and lambda_2");
  }
  if (eval(1).value() != 0.0) throw Error(ErrorCode::InvalidSequence, "lambda_1 must equal 1 (L(1) = 0)");
  if (eval(2).is_infinite()) throw Error(ErrorCode::InvalidSequence, "lambda_2 must be positive");
}

EigenSeq EigenSeq::from_unnormalized(std::vector<ExtLogMag> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidSequence, "empty table");
  const double first = values.front().value();
  if (!std::isfinite(first)) throw Error(ErrorCode::InvalidSequence, "lambda_1 must be positive");
  for (auto& v : values) v = v.is_infinite() ? v : ExtLogMag(std::max(v.value() - first, 0.0));
  return EigenSeq(family::Tabulated{std::move(values)});
}

EigenSeq EigenSeq::iter_log() { return EigenSeq(family::IterLog{{ExtLogMag(), ExtLogMag(-std::log(0.95))}}); }

EigenSeq EigenSeq::from_json(const nlohmann::json& j) {
  Family f = family_from_json(j);
  if (j.value("normalize", false) && std::holds_alternative<family::Tabulated>(f)) {
    return from_unnormalized(std::get<family::Tabulated>(f).values);
  }
  if (j.contains("normalize") && !j.at("normalize").get<bool>()) {
    throw Error(ErrorCode::ConfigError, "eigenvalue families are always normalized to lambda_1 = 1");
  }
  EigenSeq seq(std::move(f));
  return j.value("analytic", true) ? seq : seq.without_analytic();
}

EigenSeq EigenSeq::without_analytic() const {
  EigenSeq copy = *this;
  copy.analytic_ = false;
  return copy;
}

WeightSeq::WeightSeq(Family family, bool normalize) : Sequence(std::move(family), normalize) {
  if (std::holds_alternative<family::Tabulated>(family_) || std::holds_alternative<family::EventuallyZero>(family_) ||
      std::holds_alternative<family::IterLog>(family_) || std::holds_alternative<family::InverseLog>(family_)) {
    normalized_ = true;  // these families carry no shift
  }
}

WeightSeq WeightSeq::from_json(const nlohmann::json& j) {
  WeightSeq seq(family_from_json(j), j.value("normalize", true));
  return j.value("analytic", true) ? seq : seq.without_analytic();
}

WeightSeq WeightSeq::without_analytic() const {
  WeightSeq copy = *this;
  copy.analytic_ = false;
  return copy;
}

std::vector<ExtLogMag> read_table(std::istream& in) {
  std::vector<ExtLogMag> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string idx_tok, val_tok, extra;
    if (!(ss >> idx_tok)) continue;
    if (!(ss >> val_tok) || (ss >> extra)) {
      throw Error(ErrorCode::ConfigError, "table line " + std::to_string(lineno) + ": expected 'index value'");
    }
    char* end = nullptr;
    const unsigned long long idx = std::strtoull(idx_tok.c_str(), &end, 10);
    if (*end != '\0' || idx != values.size() + 1) {
      throw Error(ErrorCode::ConfigError, "table line " + std::to_string(lineno) + ": indices must run 1, 2, 3, ...");
    }
    const double v = std::strtod(val_tok.c_str(), &end);
    if (*end != '\0') {
      throw Error(ErrorCode::ConfigError, "table line " + std::to_string(lineno) + ": bad value '" + val_tok + "'");
    }
    values.emplace_back(v);
  }
  require_monotone(values, "table");
  return values;
}

std::vector<ExtLogMag> read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open table file '" + path + "'");
  return read_table(in);
}

void write_table(std::ostream& out, const std::vector<ExtLogMag>& values) {
  out << "# index log_inv_value\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i].value());
    out << (i + 1) << ' ' << buf << '\n';
  }
}

}  // namespace exptract
