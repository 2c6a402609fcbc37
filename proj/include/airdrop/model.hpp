#ifndef AIRDROP_MODEL_HPP
#define AIRDROP_MODEL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "airdrop/technology.hpp"

namespace airdrop {

// A strategy profile a = (a_1, ..., a_n), a_i drawn from the player's action set.
using Profile = std::vector<double>;

// Plain description of a game instance. Validate by constructing a Game.
struct GameConfig {
  int n = 1;
  std::vector<double> costs;                 // c_i, per unit of effort
  double rho = 0.0;                          // airdrop fraction
  double t_tot = 1.0;                        // token total supply
  double beta = 0.0;                         // inverse noise
  TechnologySpec technology;
  std::vector<std::vector<double>> actions;  // empty means {0, 1} for everyone
  double d_v = 0.0;                          // development cost

  // Uniform costs alpha and binary actions.
  static GameConfig binary_uniform(int n, double alpha, double rho, double beta, TechnologySpec tech,
                                   double t_tot = 1.0, double d_v = 0.0);
};

struct Metrics {
  double system_value = 0.0;
  double token_value = 0.0;
  double social_cost = 0.0;
  double users_welfare = 0.0;
  double designer_profit = 0.0;
};

// Validated, immutable game: the config plus its technology evaluator.
class Game {
 public:
  explicit Game(GameConfig config);

  const GameConfig& config() const { return config_; }
  const Technology& technology() const { return technology_; }
  int players() const { return config_.n; }
  double rho() const { return config_.rho; }
  double beta() const { return config_.beta; }
  double cost(int i) const { return config_.costs[static_cast<std::size_t>(i)]; }
  std::span<const double> actions(int i) const { return config_.actions[static_cast<std::size_t>(i)]; }

  // Reward per unit of system value, rho / n.
  double reward_rate() const { return config_.rho / config_.n; }

  bool binary_actions() const { return binary_; }
  bool uniform_costs() const { return uniform_costs_; }
  bool anonymous() const { return technology_.is_anonymous(); }
  // Uniform cost alpha; throws Unsupported for heterogeneous costs.
  double alpha() const;

  // Product of the action-set sizes, saturating at SIZE_MAX.
  std::size_t profile_count() const;

  Game with_rho(double rho) const;
  Game with_beta(double beta) const;

  void check_profile(std::span<const double> profile) const;
  double value(std::span<const double> profile) const;

 private:
  GameConfig config_;
  Technology technology_;
  bool binary_ = false;
  bool uniform_costs_ = false;
};

double token_value(double v, double t_tot);
double per_player_tokens(double rho, double t_tot, int n);

double utility(const Game& game, std::span<const double> profile, int i);
double potential(const Game& game, std::span<const double> profile);
double social_cost(const Game& game, std::span<const double> profile);
Metrics metrics(const Game& game, std::span<const double> profile);

// Binary profile with the first `ell` players contributing.
Profile level_profile(int n, int ell);

}  // namespace airdrop

#endif  // AIRDROP_MODEL_HPP
