#ifndef AIRDROP_BIRTH_DEATH_HPP
#define AIRDROP_BIRTH_DEATH_HPP

#include <optional>
#include <vector>

#include "airdrop/model.hpp"

namespace airdrop {

// The lumped (n+1)-state chain over contribution levels for anonymous
// technologies with binary actions and uniform costs. Everything that can
// underflow is kept in log space; probabilities are exponentiated on demand.
struct BirthDeathChain {
  int n = 0;
  std::vector<double> up;    // p(l)
  std::vector<double> down;  // q(l)
  std::vector<double> hold;  // 1 - p(l) - q(l)
  std::vector<double> log_up;
  std::vector<double> log_down;
  std::vector<double> log_weight;  // unnormalized log stationary weights
  double log_z = 0.0;

  double log_prob(int ell) const { return log_weight[static_cast<std::size_t>(ell)] - log_z; }
  double prob(int ell) const;
};

BirthDeathChain build_chain(const Game& game);

struct StationaryLaw {
  std::vector<double> log_prob;
  double mean_level = 0.0;
  double expected_value = 0.0;    // V(pi) = sum_l pi(l) V(l)
  std::optional<double> p_high;   // threshold technologies only

  int size() const { return static_cast<int>(log_prob.size()); }
  double prob(int ell) const;
  std::vector<double> probs() const;
};

StationaryLaw stationary(const Game& game);

// Second route to the stationary law: log-probabilities from the product of
// p(l)/q(l+1) ratios.
std::vector<double> stationary_by_detailed_balance(const BirthDeathChain& chain);

// p_high(rho) = 1 / (1 + C exp(-rho B)) for threshold technologies.
struct SuccessProbability {
  double p_high = 0.0;
  double b = 0.0;      // (beta / n) (V_high - V_low)
  double c = 0.0;      // S_low / S_high, may be +inf
  double log_c = 0.0;

  double at(double rho) const;
};

SuccessProbability success_probability(const Game& game);

struct HittingTime {
  double value = 0.0;
  bool finite = true;
};

// Exact E_from[T_to] for from <= to via E_l T_{l+1} = pi([0,l]) / (pi(l) p(l)).
HittingTime expected_hitting_exact(const BirthDeathChain& chain, int from, int to);
HittingTime expected_hitting_exact(const Game& game, int from, int to);

// d(l) = pi(l+1) / pi(l).
double drift(const Game& game, int ell);

struct HittingLowerBound {
  double interval_drift = 0.0;  // max drift over [l1, l2 - 1]
  double steepness = 0.0;       // max V increment over the interval
  double log_drift_form = 0.0;  // log (1/d_I)^(l2 - l1)
  double log_steep_form = 0.0;  // log of the s-steep form
  double drift_form = 1.0;
  double steep_form = 1.0;
  double best = 1.0;
};

// Lower bounds on the hitting time of `target` from level 0 derived from the
// drift and the steepness over [l1, l2], l2 < target.
HittingLowerBound hitting_lower_bound(const Game& game, int l1, int l2, int target);

// Threshold forms: (exp(alpha beta) (l+1)/(n-l))^(tau - l) for 0 <= l <= tau,
// and (1 + 1/l*)^(tau - l* - 1) with the real-valued l*.
double threshold_hitting_bound_at(const Game& game, int ell);
double threshold_hitting_bound_ell_star(const Game& game);

struct CutoffReport {
  int ell0 = 0;
  double left = 0.0;
  double right = 0.0;
  double t_cutoff = 0.0;
  double mixing_lower = 0.0;  // t_cutoff / 24
  double mixing_upper = 0.0;  // 288 * t_cutoff
};

inline constexpr double kMixingLowerFactor = 1.0 / 24.0;
inline constexpr double kMixingUpperFactor = 288.0;

CutoffReport t_cutoff(const BirthDeathChain& chain);
CutoffReport t_cutoff(const Game& game);

struct MixingLowerBound {
  bool applicable = false;  // requires p_high > 1/2
  double p_high = 0.0;
  double log_proof_form = 0.0;      // alpha beta (tau - 1) - log C(n, tau - 1)
  double log_statement_form = 0.0;  // alpha beta + (tau - 1) - log C(n, tau - 1)
  double proof_form = 0.0;
  double statement_form = 0.0;
};

MixingLowerBound mixing_lower_bound_threshold(const Game& game);

// l* = n / (1 + exp(alpha beta)).
double ell_star(const Game& game);

}  // namespace airdrop

#endif  // AIRDROP_BIRTH_DEATH_HPP
