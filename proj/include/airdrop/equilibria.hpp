#ifndef AIRDROP_EQUILIBRIA_HPP
#define AIRDROP_EQUILIBRIA_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "airdrop/model.hpp"

namespace airdrop {

// A profitable unilateral deviation that witnesses a profile is not a PNE.
struct Deviation {
  int player = 0;
  double from = 0.0;
  double to = 0.0;
  double gain = 0.0;  // u_i(a') - u_i(a)
};

struct NashCheck {
  bool is_equilibrium = true;
  std::optional<Deviation> deviation;
};

// Checks the two monotone-deviation conditions (upward deviations never pay
// unless value rises enough; downward deviations need a strict value drop).
NashCheck is_pure_nash(const Game& game, const Profile& profile);

// Definitional check u_i(a) >= u_i(a') for every unilateral deviation.
NashCheck is_pure_nash_by_deviation(const Game& game, const Profile& profile);

// A class of profiles sharing contribution level `ell`. Witness counts can
// exceed double range for large n, so their log is kept as well.
struct LevelClass {
  int ell = 0;
  double log_witnesses = 0.0;
  double witnesses = 1.0;
  double potential = 0.0;  // best potential among the class members
};

struct EquilibriumReport {
  bool level_form = false;  // true when produced by the anonymous-binary fast path

  // Profile form (brute force).
  std::vector<Profile> pne;
  std::vector<Profile> potmax;
  std::vector<double> limit_distribution;  // aligned with potmax

  // Level form (fast path).
  std::vector<LevelClass> pne_levels;
  std::vector<LevelClass> potmax_levels;
  std::vector<double> level_limit_distribution;  // aligned with potmax_levels

  double max_potential = 0.0;
};

struct EnumerationOptions {
  std::size_t profile_cap = 2'000'000;
  double potential_tolerance = 1e-9;
};

// Anonymous technology with binary actions. Takes the fast path.
bool supports_level_path(const Game& game);

EquilibriumReport enumerate_pne_brute_force(const Game& game, const EnumerationOptions& opt = {});
EquilibriumReport enumerate_pne_levels(const Game& game, const EnumerationOptions& opt = {});
// Fast path when supported, brute force otherwise.
EquilibriumReport enumerate_pne(const Game& game, const EnumerationOptions& opt = {});

// Fills potmax and the vanishing-noise limit distribution (uniform over the
// potential maximizers, ties within opt.potential_tolerance).
EquilibriumReport potential_maximizers_brute_force(const Game& game, const EnumerationOptions& opt = {});
EquilibriumReport potential_maximizers_levels(const Game& game, const EnumerationOptions& opt = {});
EquilibriumReport potential_maximizers(const Game& game, const EnumerationOptions& opt = {});

// --- Threshold technology, uniform costs, binary actions. ---

// alpha * n * tau / (V_high - V_low). Values above 1 are infeasible.
double threshold_critical_rho(const Game& game);

enum class DesignerRegimeKind { no_airdrop_forced, no_airdrop_optimal, airdrop_optimal };
std::string_view to_string(DesignerRegimeKind kind);

struct DesignerRegime {
  DesignerRegimeKind regime = DesignerRegimeKind::no_airdrop_forced;
  double rho_c = 0.0;
  double recommended_rho = 0.0;
  double guaranteed_profit = 0.0;
  double epsilon = 1e-3;
  bool boundary = false;  // alpha*n*tau sits on a regime boundary
};

// Vanishing-noise designer regime: compares alpha*n*tau to dV and to
// dV * (1 - V_low / V_high).
DesignerRegime threshold_designer_regime(const Game& game, double d_v, double epsilon = 1e-3);

// --- Linear technology, heterogeneous costs. ---

struct LinearOptimum {
  double rho_star = 0.0;
  int ell_star = 0;
  double profit = 0.0;
  std::vector<int> order;  // order[k] = original index of the k-th cheapest player
};

LinearOptimum linear_optimal_rho(std::vector<double> costs, double lambda_v, int n, double d_v = 0.0);

// --- Quadratic technology V(l) = l^2 / tau. ---

struct QuadraticRegime {
  int region = 1;          // 1: alpha < 1/(tau n), 2: in between, 3: alpha > 1/tau
  bool boundary = false;   // alpha equals one of the two thresholds
  double bad_pne_rho_max;  // bad PNE exists iff rho <= alpha*tau*n (region 1)
  double selection_rho;    // vanishing noise selects the good PNE iff rho > alpha*tau (region 2)
  std::string_view description;

  // Whether vanishing-noise logit dynamics select the all-contribute state.
  bool selects_good(double rho) const;
};

QuadraticRegime quadratic_regimes(double alpha, double tau, int n);

}  // namespace airdrop

#endif  // AIRDROP_EQUILIBRIA_HPP
