#include "l1conc/bounds.hpp"

#include <cmath>
#include <numbers>

#include "l1conc/error.hpp"

namespace l1conc {
namespace {

void check_n(std::uint64_t n) {
  if (n < 1) throw ValidationError("bound requires n >= 1");
}

void check_S(std::uint64_t S) {
  if (S < 2) throw ValidationError("bound requires S >= 2");
}

void check_delta_positive(double delta) {
  if (!(delta > 0.0) || std::isnan(delta)) throw DomainError("bound requires delta > 0");
}

double radical(double radicand, std::uint64_t n) {
  if (radicand < 0.0) throw DomainError("bound radicand is negative for this delta");
  return std::sqrt(radicand / static_cast<double>(n));
}

// ln(2^S - 2) = S ln 2 + ln(1 - 2^(1-S)); avoids forming 2^S.
double log_two_pow_minus_two(std::uint64_t S) {
  const double s = static_cast<double>(S);
  return s * std::numbers::ln2 + std::log1p(-std::exp2(1.0 - s));
}

}  // namespace

std::string_view to_string(BoundFamily family) noexcept {
  switch (family) {
    case BoundFamily::WeissmanUnion: return "weissman-union";
    case BoundFamily::WeissmanExact: return "weissman-exact";
    case BoundFamily::Devroye: return "devroye";
    case BoundFamily::Agrawal: return "agrawal";
  }
  return "unknown";
}

std::optional<BoundFamily> parse_bound_family(std::string_view text) noexcept {
  if (text == "weissman-union") return BoundFamily::WeissmanUnion;
  if (text == "weissman-exact") return BoundFamily::WeissmanExact;
  if (text == "devroye") return BoundFamily::Devroye;
  if (text == "agrawal") return BoundFamily::Agrawal;
  return std::nullopt;
}

void validate(const BoundSpec& spec) {
  check_n(spec.n);
  check_S(spec.S);
  if (!(spec.delta > 0.0 && spec.delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
}

double weissman_epsilon(std::uint64_t n, std::uint64_t S, double delta, WeissmanForm form) {
  check_n(n);
  check_S(S);
  check_delta_positive(delta);
  if (form == WeissmanForm::Union) {
    return radical(2.0 * static_cast<double>(S) * std::log(2.0 / delta), n);
  }
  return radical(2.0 * (log_two_pow_minus_two(S) - std::log(delta)), n);
}

double devroye_epsilon(std::uint64_t n, double delta) {
  check_n(n);
  check_delta_positive(delta);
  if (delta > 3.0) throw DomainError("devroye bound requires delta <= 3");
  return 5.0 * radical(std::log(3.0 / delta), n);
}

bool devroye_valid(std::uint64_t S, double delta) {
  check_S(S);
  return delta <= 3.0 * std::exp(-0.8 * static_cast<double>(S));
}

double agrawal_epsilon(std::uint64_t n, double delta) {
  check_n(n);
  check_delta_positive(delta);
  if (delta > 1.0) throw DomainError("agrawal bound requires delta <= 1");
  return radical(2.0 * std::log(1.0 / delta), n);
}

BoundEvaluation evaluate(const BoundSpec& spec) {
  validate(spec);
  BoundEvaluation out;
  out.spec = spec;
  switch (spec.family) {
    case BoundFamily::WeissmanUnion:
      out.epsilon = weissman_epsilon(spec.n, spec.S, spec.delta, WeissmanForm::Union);
      break;
    case BoundFamily::WeissmanExact:
      out.epsilon = weissman_epsilon(spec.n, spec.S, spec.delta, WeissmanForm::Exact);
      break;
    case BoundFamily::Devroye:
      out.epsilon = devroye_epsilon(spec.n, spec.delta);
      out.valid = devroye_valid(spec.S, spec.delta);
      break;
    case BoundFamily::Agrawal:
      out.epsilon = agrawal_epsilon(spec.n, spec.delta);
      break;
  }
  out.vacuous = out.epsilon > 2.0;
  return out;
}

}  // namespace l1conc
