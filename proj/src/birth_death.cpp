#include "airdrop/birth_death.hpp"

#include <cmath>
#include <limits>

#include "airdrop/error.hpp"
#include "airdrop/numeric.hpp"

namespace airdrop {

namespace {

using numeric::kNegInf;

void require_lumpable(const Game& game) {
  if (!game.anonymous()) throw Unsupported("birth-death analytics need an anonymous technology");
  if (!game.binary_actions()) throw Unsupported("birth-death analytics need binary actions");
  if (!game.uniform_costs()) throw Unsupported("birth-death analytics need uniform costs");
}

const TechnologySpec& threshold_spec(const Game& game) {
  if (game.technology().kind() != TechnologyKind::threshold)
    throw Unsupported("operation requires a threshold technology");
  return game.technology().spec();
}

double safe_exp(double x) { return x == kNegInf ? 0.0 : std::exp(x); }

}  // namespace

double BirthDeathChain::prob(int ell) const { return std::exp(log_prob(ell)); }

BirthDeathChain build_chain(const Game& game) {
  require_lumpable(game);
  const int n = game.players();
  const double alpha = game.alpha(), beta = game.beta(), rate = game.reward_rate();
  const Technology& tech = game.technology();
  const auto size = static_cast<std::size_t>(n) + 1;

  BirthDeathChain ch;
  ch.n = n;
  ch.up.assign(size, 0.0);
  ch.down.assign(size, 0.0);
  ch.hold.assign(size, 0.0);
  ch.log_up.assign(size, kNegInf);
  ch.log_down.assign(size, kNegInf);
  ch.log_weight.assign(size, 0.0);

  std::vector<double> v(size);
  for (int l = 0; l <= n; ++l) v[static_cast<std::size_t>(l)] = tech.eval_anonymous(l);

  for (int l = 0; l <= n; ++l) {
    const auto k = static_cast<std::size_t>(l);
    if (l < n) {
      // A non-contributor switching on gains rate * dV - alpha.
      const double gap = rate * (v[k + 1] - v[k]) - alpha;
      ch.log_up[k] = std::log(static_cast<double>(n - l) / n) + numeric::log_logistic(beta * gap);
      ch.up[k] = std::exp(ch.log_up[k]);
    }
    if (l > 0) {
      const double gap = rate * (v[k] - v[k - 1]) - alpha;
      ch.log_down[k] = std::log(static_cast<double>(l) / n) + numeric::log_logistic(-beta * gap);
      ch.down[k] = std::exp(ch.log_down[k]);
    }
    ch.hold[k] = 1.0 - ch.up[k] - ch.down[k];
    ch.log_weight[k] = numeric::log_binomial(n, l) - alpha * beta * l + beta * rate * (v[k] - v[0]);
  }
  ch.log_z = numeric::log_sum_exp(ch.log_weight);
  return ch;
}

double StationaryLaw::prob(int ell) const { return std::exp(log_prob[static_cast<std::size_t>(ell)]); }

std::vector<double> StationaryLaw::probs() const {
  std::vector<double> p;
  p.reserve(log_prob.size());
  for (double l : log_prob) p.push_back(std::exp(l));
  return p;
}

StationaryLaw stationary(const Game& game) {
  const BirthDeathChain ch = build_chain(game);
  StationaryLaw law;
  law.log_prob.resize(ch.log_weight.size());
  numeric::CompensatedSum mean, value;
  for (int l = 0; l <= ch.n; ++l) {
    const auto k = static_cast<std::size_t>(l);
    law.log_prob[k] = ch.log_prob(l);
    const double p = std::exp(law.log_prob[k]);
    mean.add(p * l);
    value.add(p * game.technology().eval_anonymous(l));
  }
  law.mean_level = mean.value();
  law.expected_value = value.value();
  if (game.technology().kind() == TechnologyKind::threshold) {
    const int tau = static_cast<int>(game.technology().spec().tau);
    std::vector<double> high(law.log_prob.begin() + tau, law.log_prob.end());
    law.p_high = std::exp(numeric::log_sum_exp(high));
  }
  return law;
}

std::vector<double> stationary_by_detailed_balance(const BirthDeathChain& chain) {
  std::vector<double> logw(static_cast<std::size_t>(chain.n) + 1, 0.0);
  for (int l = 0; l < chain.n; ++l) {
    const auto k = static_cast<std::size_t>(l);
    logw[k + 1] = logw[k] + chain.log_up[k] - chain.log_down[k + 1];
  }
  const double z = numeric::log_sum_exp(logw);
  for (double& w : logw) w -= z;
  return logw;
}

double SuccessProbability::at(double rho) const {
  if (std::isinf(log_c)) return log_c > 0 ? 0.0 : 1.0;
  return numeric::logistic(rho * b - log_c);
}

SuccessProbability success_probability(const Game& game) {
  require_lumpable(game);
  const auto& spec = threshold_spec(game);
  const int n = game.players(), tau = static_cast<int>(spec.tau);
  const double ab = game.alpha() * game.beta();
  std::vector<double> low, high;
  for (int l = 0; l <= n; ++l) (l < tau ? low : high).push_back(numeric::log_binomial(n, l) - ab * l);
  SuccessProbability s;
  s.log_c = numeric::log_sum_exp(low) - numeric::log_sum_exp(high);
  s.c = std::exp(s.log_c);
  s.b = game.beta() / n * (spec.v_high - spec.v_low);
  s.p_high = s.at(game.rho());
  return s;
}

HittingTime expected_hitting_exact(const BirthDeathChain& chain, int from, int to) {
  if (from < 0 || to > chain.n || from > to) throw InvalidConfig("levels", "need 0 <= from <= to <= n");
  HittingTime h;
  numeric::CompensatedSum total;
  double prefix = kNegInf;  // log pi([0, l]) up to the common normalizer
  for (int l = 0; l < to; ++l) {
    const auto k = static_cast<std::size_t>(l);
    prefix = numeric::log_add(prefix, chain.log_weight[k]);
    if (l < from) continue;
    if (chain.log_up[k] == kNegInf) return {std::numeric_limits<double>::infinity(), false};
    total.add(std::exp(prefix - chain.log_weight[k] - chain.log_up[k]));
  }
  h.value = total.value();
  h.finite = std::isfinite(h.value);
  return h;
}

HittingTime expected_hitting_exact(const Game& game, int from, int to) {
  return expected_hitting_exact(build_chain(game), from, to);
}

double drift(const Game& game, int ell) {
  if (ell < 0 || ell >= game.players()) throw InvalidConfig("ell", "must lie in [0, n)");
  const BirthDeathChain ch = build_chain(game);
  const auto k = static_cast<std::size_t>(ell);
  return std::exp(ch.log_weight[k + 1] - ch.log_weight[k]);
}

HittingLowerBound hitting_lower_bound(const Game& game, int l1, int l2, int target) {
  const int n = game.players();
  if (!(0 <= l1 && l1 <= l2 && l2 < target && target <= n))
    throw InvalidConfig("interval", "need 0 <= l1 <= l2 < target <= n");
  const BirthDeathChain ch = build_chain(game);
  HittingLowerBound b;
  const int len = l2 - l1;
  double log_d = kNegInf;
  for (int l = l1; l < l2; ++l) {
    const auto k = static_cast<std::size_t>(l);
    log_d = std::max(log_d, ch.log_weight[k + 1] - ch.log_weight[k]);
  }
  b.interval_drift = safe_exp(log_d);
  b.log_drift_form = len == 0 ? 0.0 : -len * log_d;
  b.steepness = game.technology().steepness(l1, l2);
  const double log_base = -game.beta() * (game.reward_rate() * b.steepness - game.alpha()) +
                          std::log((l1 + 1.0) / (n - l1));
  b.log_steep_form = len * log_base;
  b.drift_form = std::exp(b.log_drift_form);
  b.steep_form = std::exp(b.log_steep_form);
  b.best = std::max(b.drift_form, b.steep_form);
  return b;
}

double threshold_hitting_bound_at(const Game& game, int ell) {
  const auto& spec = threshold_spec(game);
  require_lumpable(game);
  const int n = game.players(), tau = static_cast<int>(spec.tau);
  if (ell < 0 || ell > tau || ell >= n) throw InvalidConfig("ell", "need 0 <= ell <= tau and ell < n");
  const double ab = game.alpha() * game.beta();
  return std::exp((tau - ell) * (ab + std::log((ell + 1.0) / (n - ell))));
}

double threshold_hitting_bound_ell_star(const Game& game) {
  const auto& spec = threshold_spec(game);
  const double ls = ell_star(game);
  return std::pow(1.0 + 1.0 / ls, spec.tau - ls - 1.0);
}

CutoffReport t_cutoff(const BirthDeathChain& ch) {
  const int n = ch.n;
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<double> prefix(size), suffix(size);
  double acc = kNegInf;
  for (std::size_t k = 0; k < size; ++k) prefix[k] = acc = numeric::log_add(acc, ch.log_weight[k]);
  acc = kNegInf;
  for (std::size_t k = size; k-- > 0;) suffix[k] = acc = numeric::log_add(acc, ch.log_weight[k]);

  CutoffReport r;
  const double log_half = std::log(0.5) - 1e-12;
  r.ell0 = n;
  for (int l = 0; l <= n; ++l) {
    if (prefix[static_cast<std::size_t>(l)] - ch.log_z >= log_half) {
      r.ell0 = l;
      break;
    }
  }
  numeric::CompensatedSum left, right;
  for (int l = 0; l < r.ell0; ++l) {
    const auto k = static_cast<std::size_t>(l);
    left.add(std::exp(prefix[k] - ch.log_weight[k] - ch.log_up[k]));
  }
  for (int l = r.ell0 + 1; l <= n; ++l) {
    const auto k = static_cast<std::size_t>(l);
    right.add(std::exp(suffix[k] - ch.log_weight[k] - ch.log_down[k]));
  }
  r.left = left.value();
  r.right = right.value();
  r.t_cutoff = std::max(r.left, r.right);
  r.mixing_lower = r.t_cutoff * kMixingLowerFactor;
  r.mixing_upper = r.t_cutoff * kMixingUpperFactor;
  return r;
}

CutoffReport t_cutoff(const Game& game) { return t_cutoff(build_chain(game)); }

MixingLowerBound mixing_lower_bound_threshold(const Game& game) {
  const auto& spec = threshold_spec(game);
  const int n = game.players(), tau = static_cast<int>(spec.tau);
  const double ab = game.alpha() * game.beta();
  MixingLowerBound m;
  m.p_high = success_probability(game).p_high;
  m.applicable = m.p_high > 0.5;
  const double log_binom = numeric::log_binomial(n, tau - 1);
  m.log_proof_form = ab * (tau - 1) - log_binom;
  m.log_statement_form = ab + (tau - 1) - log_binom;
  m.proof_form = std::exp(m.log_proof_form);
  m.statement_form = std::exp(m.log_statement_form);
  return m;
}

double ell_star(const Game& game) {
  if (!game.uniform_costs()) throw Unsupported("l* needs uniform costs");
  return game.players() * numeric::logistic(-game.alpha() * game.beta());
}

}  // namespace airdrop
