#include "airdrop/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "airdrop/error.hpp"

namespace airdrop {

namespace {

Technology build_technology(GameConfig& config) {
  if (config.n < 1) throw InvalidConfig("n", "must be >= 1");
  return Technology(config.technology, config.n);
}

}  // namespace

GameConfig GameConfig::binary_uniform(int n, double alpha, double rho, double beta, TechnologySpec tech,
                                      double t_tot, double d_v) {
  GameConfig c;
  c.n = n;
  c.costs.assign(static_cast<std::size_t>(std::max(n, 0)), alpha);
  c.rho = rho;
  c.beta = beta;
  c.technology = std::move(tech);
  c.t_tot = t_tot;
  c.d_v = d_v;
  return c;
}

Game::Game(GameConfig config) : config_(std::move(config)), technology_(build_technology(config_)) {
  const auto n = static_cast<std::size_t>(config_.n);
  if (config_.costs.size() != n) throw InvalidConfig("costs", "length must equal n");
  for (std::size_t i = 0; i < n; ++i) {
    const double c = config_.costs[i];
    if (!std::isfinite(c) || c < 0)
      throw InvalidConfig("costs[" + std::to_string(i) + "]", "must be a finite nonnegative real");
  }
  if (!(config_.rho >= 0 && config_.rho <= 1)) throw InvalidConfig("rho", "must lie in [0, 1]");
  if (!(config_.t_tot > 0) || !std::isfinite(config_.t_tot)) throw InvalidConfig("t_tot", "must be > 0");
  if (!(config_.beta >= 0) || !std::isfinite(config_.beta)) throw InvalidConfig("beta", "must be >= 0");
  if (!(config_.d_v >= 0) || !std::isfinite(config_.d_v)) throw InvalidConfig("d_v", "must be >= 0");

  if (config_.actions.empty()) config_.actions.assign(n, {0.0, 1.0});
  if (config_.actions.size() == 1 && n > 1) config_.actions.assign(n, config_.actions.front());
  if (config_.actions.size() != n) throw InvalidConfig("actions", "need one action set per player");
  binary_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = config_.actions[i];
    const std::string field = "actions[" + std::to_string(i) + "]";
    if (a.empty()) throw InvalidConfig(field, "must be nonempty");
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!std::isfinite(a[k]) || a[k] < 0) throw InvalidConfig(field, "entries must be nonnegative reals");
      if (k > 0 && !(a[k - 1] < a[k])) throw InvalidConfig(field, "must be strictly ascending");
    }
    binary_ = binary_ && a.size() == 2 && a[0] == 0.0 && a[1] == 1.0;
  }
  uniform_costs_ = std::all_of(config_.costs.begin(), config_.costs.end(),
                               [&](double c) { return c == config_.costs.front(); });
}

double Game::alpha() const {
  if (!uniform_costs_) throw Unsupported("operation requires uniform costs");
  return config_.costs.front();
}

std::size_t Game::profile_count() const {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  for (const auto& a : config_.actions) {
    if (total > kMax / a.size()) return kMax;
    total *= a.size();
  }
  return total;
}

Game Game::with_rho(double rho) const {
  GameConfig c = config_;
  c.rho = rho;
  return Game(std::move(c));
}

Game Game::with_beta(double beta) const {
  GameConfig c = config_;
  c.beta = beta;
  return Game(std::move(c));
}

void Game::check_profile(std::span<const double> profile) const {
  if (profile.size() != static_cast<std::size_t>(config_.n))
    throw InvalidConfig("profile", "length must equal n");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& a = config_.actions[i];
    if (!std::binary_search(a.begin(), a.end(), profile[i]))
      throw InvalidConfig("profile[" + std::to_string(i) + "]", "not a member of the action set");
  }
}

double Game::value(std::span<const double> profile) const { return technology_.eval_profile(profile); }

double token_value(double v, double t_tot) {
  if (!(t_tot > 0)) throw InvalidConfig("t_tot", "must be > 0");
  return v / t_tot;
}

double per_player_tokens(double rho, double t_tot, int n) {
  if (!(rho >= 0 && rho <= 1)) throw InvalidConfig("rho", "must lie in [0, 1]");
  if (!(t_tot > 0)) throw InvalidConfig("t_tot", "must be > 0");
  if (n < 1) throw InvalidConfig("n", "must be >= 1");
  return rho * t_tot / n;
}

double utility(const Game& game, std::span<const double> profile, int i) {
  if (i < 0 || i >= game.players()) throw InvalidConfig("i", "player index out of range");
  game.check_profile(profile);
  return game.reward_rate() * game.value(profile) - game.cost(i) * profile[static_cast<std::size_t>(i)];
}

double social_cost(const Game& game, std::span<const double> profile) {
  game.check_profile(profile);
  double sc = 0.0;
  for (int i = 0; i < game.players(); ++i) sc += game.cost(i) * profile[static_cast<std::size_t>(i)];
  return sc;
}

double potential(const Game& game, std::span<const double> profile) {
  return game.reward_rate() * game.value(profile) - social_cost(game, profile);
}

Metrics metrics(const Game& game, std::span<const double> profile) {
  Metrics m;
  m.system_value = game.value(profile);
  m.token_value = token_value(m.system_value, game.config().t_tot);
  m.social_cost = social_cost(game, profile);
  m.users_welfare = game.rho() * m.system_value - m.social_cost;
  m.designer_profit = (1.0 - game.rho()) * m.system_value - game.config().d_v;
  return m;
}

Profile level_profile(int n, int ell) {
  Profile a(static_cast<std::size_t>(n), 0.0);
  std::fill_n(a.begin(), std::clamp(ell, 0, n), 1.0);
  return a;
}

}  // namespace airdrop
