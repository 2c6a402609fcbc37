#ifndef AIRDROP_DESIGNER_HPP
#define AIRDROP_DESIGNER_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "airdrop/birth_death.hpp"
#include "airdrop/equilibria.hpp"
#include "airdrop/model.hpp"

namespace airdrop {

struct ProfitPoint {
  double rho = 0.0;
  std::optional<double> p_high;  // threshold technologies only
  double value = 0.0;            // V(pi_rho)
  double profit = 0.0;           // (1 - rho) V(pi_rho) - d_V
};

struct ProfitCurve {
  std::vector<ProfitPoint> points;
  std::size_t argmax = 0;
  double rho_star = 0.0;
  double profit_star = 0.0;
  // Threshold-only metadata.
  std::optional<double> b;
  std::optional<double> c;
  std::optional<double> rho_bar;  // 1 - 1/B when B > 1
  // Largest relative gap between the closed form and the summation route
  // (threshold with V_low = 0), 0 otherwise.
  double closed_form_gap = 0.0;
};

// Expected profit under the stationary law over an ascending grid in [0, 1].
ProfitCurve profit_curve(const Game& game, double d_v, const std::vector<double>& rho_grid);

std::vector<double> linspace(double from, double to, std::size_t points);

enum class ProfitRegime {
  no_airdrop,         // n >= beta V_high: rho* = 0
  capped,             // n < beta V_high: rho* <= rho_bar
  strictly_positive,  // n < beta V_high (1 - p_high(0)): rho* > 0
  grid_only,        // V_low != 0, grid search only
};

std::string_view to_string(ProfitRegime regime);

struct OptimalRho {
  double rho_star = 0.0;
  double profit_star = 0.0;
  ProfitRegime regime = ProfitRegime::no_airdrop;
  double b = 0.0;
  double c = 0.0;
  std::optional<double> rho_bar;
  double p_high_star = 0.0;
  std::optional<double> p_high_bar;  // 1 / (1 + C e^(1 - B))
  double p_high_zero = 0.0;
};

inline constexpr std::size_t kOptimizerGridPoints = 10'001;

// Finite-noise optimum for threshold technologies. With V_low = 0 it combines
// a dense grid with golden-section refinement on [0, rho_bar]; otherwise it
// falls back to the grid and flags the result.
OptimalRho optimal_rho(const Game& game, double d_v);

// Vanishing-noise counterpart, reported next to the finite-noise optimum.
DesignerRegime vanishing_noise_profit(const Game& game, double d_v, double epsilon = 1e-3);

}  // namespace airdrop

#endif  // AIRDROP_DESIGNER_HPP
