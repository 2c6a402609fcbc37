#include "airdrop/technology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "airdrop/error.hpp"

namespace airdrop {

namespace {

constexpr std::string_view kKindNames[] = {"threshold", "linear",  "quadratic", "sshaped",
                                           "concave",   "table",   "general"};

std::string params_field(const char* name) { return std::string("technology.params.") + name; }

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw InvalidConfig(params_field(name), "must be finite");
}

// Integer-valued sums from action grids accumulate rounding noise.
bool as_level(double ell, int& out) {
  const double r = std::round(ell);
  if (std::abs(ell - r) > 1e-9 * std::max(1.0, std::abs(ell))) return false;
  out = static_cast<int>(r);
  return true;
}

}  // namespace

std::string_view to_string(TechnologyKind kind) { return kKindNames[static_cast<int>(kind)]; }

TechnologyKind technology_kind_from_string(std::string_view name) {
  for (int k = 0; k < 7; ++k)
    if (kKindNames[k] == name) return static_cast<TechnologyKind>(k);
  throw InvalidConfig("technology.kind", "unknown kind '" + std::string(name) + "'");
}

TechnologySpec TechnologySpec::threshold(int tau, double v_low, double v_high) {
  TechnologySpec s;
  s.kind = TechnologyKind::threshold;
  s.tau = tau;
  s.v_low = v_low;
  s.v_high = v_high;
  return s;
}

TechnologySpec TechnologySpec::linear(double lambda_v) {
  TechnologySpec s;
  s.kind = TechnologyKind::linear;
  s.lambda_v = lambda_v;
  return s;
}

TechnologySpec TechnologySpec::quadratic(double tau) {
  TechnologySpec s;
  s.kind = TechnologyKind::quadratic;
  s.tau = tau;
  return s;
}

TechnologySpec TechnologySpec::sshaped(double tau, double c) {
  TechnologySpec s;
  s.kind = TechnologyKind::sshaped;
  s.tau = tau;
  s.c = c;
  return s;
}

TechnologySpec TechnologySpec::concave(double tau, double c) {
  TechnologySpec s;
  s.kind = TechnologyKind::concave;
  s.tau = tau;
  s.c = c;
  return s;
}

TechnologySpec TechnologySpec::from_table(std::vector<double> values) {
  TechnologySpec s;
  s.kind = TechnologyKind::table;
  s.table = std::move(values);
  return s;
}

TechnologySpec TechnologySpec::from_function(ProfileValueFn fn) {
  TechnologySpec s;
  s.kind = TechnologyKind::general;
  s.general = std::move(fn);
  return s;
}

Technology::Technology(const TechnologySpec& spec, int n) : spec_(spec), n_(n) {
  if (n < 1) throw InvalidConfig("n", "must be >= 1");
  switch (spec.kind) {
    case TechnologyKind::threshold: {
      require_finite(spec.tau, "tau");
      require_finite(spec.v_low, "v_low");
      require_finite(spec.v_high, "v_high");
      if (spec.tau != std::floor(spec.tau))
        throw InvalidConfig(params_field("tau"), "must be an integer level");
      if (spec.tau < 1 || spec.tau > n)
        throw InvalidConfig(params_field("tau"), "must lie in [1, n]");
      if (spec.v_low < 0) throw InvalidConfig(params_field("v_low"), "must be >= 0");
      if (!(spec.v_high > spec.v_low))
        throw InvalidConfig(params_field("v_high"), "must exceed v_low");
      break;
    }
    case TechnologyKind::linear:
      require_finite(spec.lambda_v, "lambda_v");
      if (!(spec.lambda_v > 0)) throw InvalidConfig(params_field("lambda_v"), "must be > 0");
      break;
    case TechnologyKind::quadratic:
      require_finite(spec.tau, "tau");
      if (!(spec.tau > 0)) throw InvalidConfig(params_field("tau"), "must be > 0");
      break;
    case TechnologyKind::sshaped:
      require_finite(spec.tau, "tau");
      require_finite(spec.c, "c");
      if (!(spec.tau > 0)) throw InvalidConfig(params_field("tau"), "must be > 0");
      if (!(spec.c > 0)) throw InvalidConfig(params_field("c"), "must be > 0");
      break;
    case TechnologyKind::concave:
      require_finite(spec.tau, "tau");
      require_finite(spec.c, "c");
      if (!(spec.tau > 0)) throw InvalidConfig(params_field("tau"), "must be > 0");
      if (!(spec.c > 0 && spec.c < 1)) throw InvalidConfig(params_field("c"), "must lie in (0, 1)");
      break;
    case TechnologyKind::table: {
      if (spec.table.size() != static_cast<std::size_t>(n) + 1)
        throw InvalidConfig(params_field("table"), "must have n + 1 entries");
      for (double v : spec.table) require_finite(v, "table");
      if (!std::is_sorted(spec.table.begin(), spec.table.end()))
        throw InvalidConfig(params_field("table"), "must be nondecreasing");
      break;
    }
    case TechnologyKind::general:
      if (!spec.general) throw InvalidConfig("technology.general", "mapping is empty");
      break;
  }
}

double Technology::closed_form(double ell) const {
  switch (spec_.kind) {
    case TechnologyKind::threshold:
      return ell < spec_.tau ? spec_.v_low : spec_.v_high;
    case TechnologyKind::linear:
      return spec_.lambda_v * ell;
    case TechnologyKind::quadratic:
      return ell * ell / spec_.tau;
    case TechnologyKind::sshaped: {
      if (ell <= 0) return 0.0;
      const double x = std::pow(ell / spec_.tau, spec_.c);
      return std::isinf(x) ? 1.0 : x / (1.0 + x);
    }
    case TechnologyKind::concave:
      return ell <= 0 ? 0.0 : std::pow(ell, spec_.c) / spec_.tau;
    default:
      break;
  }
  throw Unsupported("closed form requested for a non-closed-form technology");
}

double Technology::eval_anonymous(int ell) const {
  if (!is_anonymous()) throw Unsupported("general technology has no anonymous form");
  if (ell < 0 || ell > n_) throw InvalidConfig("ell", "must lie in [0, n]");
  if (spec_.kind == TechnologyKind::table) return spec_.table[static_cast<std::size_t>(ell)];
  return closed_form(ell);
}

double Technology::eval_level(double ell) const {
  if (!is_anonymous()) throw Unsupported("general technology has no anonymous form");
  if (!(ell >= 0)) throw InvalidConfig("ell", "must be >= 0");
  if (spec_.kind == TechnologyKind::table) {
    int level = 0;
    if (!as_level(ell, level) || level > n_)
      throw Unsupported("table technology needs an integer contribution level in [0, n]");
    return spec_.table[static_cast<std::size_t>(level)];
  }
  return closed_form(ell);
}

double Technology::eval_profile(std::span<const double> profile) const {
  if (profile.size() != static_cast<std::size_t>(n_))
    throw InvalidConfig("profile", "length must equal n");
  if (spec_.kind == TechnologyKind::general) return spec_.general(profile);
  return eval_level(std::accumulate(profile.begin(), profile.end(), 0.0));
}

double Technology::steepness(int l1, int l2) const {
  if (l1 < 0 || l2 > n_ || l1 > l2) throw InvalidConfig("interval", "must satisfy 0 <= l1 <= l2 <= n");
  double s = 0.0;
  for (int l = l1; l < l2; ++l) s = std::max(s, eval_anonymous(l + 1) - eval_anonymous(l));
  return s;
}

}  // namespace airdrop
