#include "airdrop/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "airdrop/error.hpp"
#include "airdrop/numeric.hpp"

namespace airdrop {

namespace {

// Binomial counts are integers; round them while doubles stay exact.
double witness_count(double log_count) {
  const double w = std::exp(log_count);
  return w < 4.5e15 ? std::round(w) : w;
}

using numeric::leq_tol;

// Visits every profile in lexicographic order of action indices (player 0
// most significant).
template <typename Fn>
void for_each_profile(const Game& game, std::size_t cap, Fn&& fn) {
  const std::size_t total = game.profile_count();
  if (total > cap)
    throw ResourceLimit("profile space of " + std::to_string(total) + " exceeds the cap of " +
                        std::to_string(cap) + "; use an anonymous binary configuration for the level path");
  const int n = game.players();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  Profile a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = game.actions(i)[0];
  for (;;) {
    fn(a);
    int i = n - 1;
    for (; i >= 0; --i) {
      auto k = static_cast<std::size_t>(i);
      if (++idx[k] < game.actions(i).size()) {
        a[k] = game.actions(i)[idx[k]];
        break;
      }
      idx[k] = 0;
      a[k] = game.actions(i)[0];
    }
    if (i < 0) return;
  }
}

void require_threshold_uniform_binary(const Game& game) {
  if (game.technology().kind() != TechnologyKind::threshold)
    throw Unsupported("operation requires a threshold technology");
  if (!game.binary_actions()) throw Unsupported("operation requires binary actions");
  if (!game.uniform_costs()) throw Unsupported("operation requires uniform costs");
}

// Players sorted by cost, ties broken by index.
std::vector<int> cost_order(std::span<const double> costs) {
  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return costs[static_cast<std::size_t>(x)] < costs[static_cast<std::size_t>(y)]; });
  return order;
}

void fill_limit_distribution(EquilibriumReport& r) {
  if (r.level_form) {
    std::vector<double> logs;
    for (const auto& c : r.potmax_levels) logs.push_back(c.log_witnesses);
    const double z = numeric::log_sum_exp(logs);
    r.level_limit_distribution.clear();
    for (double l : logs) r.level_limit_distribution.push_back(std::exp(l - z));
  } else {
    r.limit_distribution.assign(r.potmax.size(), 1.0 / static_cast<double>(r.potmax.size()));
  }
}

}  // namespace

NashCheck is_pure_nash(const Game& game, const Profile& profile) {
  game.check_profile(profile);
  const double rate = game.reward_rate();
  const double v = game.value(profile);
  Profile alt = profile;
  for (int i = 0; i < game.players(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double ai = profile[k];
    const double ci = game.cost(i);
    for (double x : game.actions(i)) {
      if (x == ai) continue;
      alt[k] = x;
      const double v2 = game.value(alt);
      alt[k] = ai;
      bool violated = false;
      if (x > ai) {
        // Increasing effort pays only if value rises faster than rho/n allows.
        if (v2 > v) violated = !leq_tol(rate, ci * (x - ai) / (v2 - v));
      } else {
        // Decreasing effort must lose value, and enough of it.
        if (v > v2)
          violated = !leq_tol(ci * (ai - x) / (v - v2), rate);
        else
          violated = v2 > v || ci > 0;
      }
      if (violated) {
        const double gain = rate * (v2 - v) - ci * (x - ai);
        return {false, Deviation{i, ai, x, gain}};
      }
    }
  }
  return {};
}

NashCheck is_pure_nash_by_deviation(const Game& game, const Profile& profile) {
  game.check_profile(profile);
  Profile alt = profile;
  for (int i = 0; i < game.players(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double u = utility(game, profile, i);
    for (double x : game.actions(i)) {
      if (x == profile[k]) continue;
      alt[k] = x;
      const double u2 = utility(game, alt, i);
      alt[k] = profile[k];
      if (!leq_tol(u2, u)) return {false, Deviation{i, profile[k], x, u2 - u}};
    }
  }
  return {};
}

bool supports_level_path(const Game& game) { return game.anonymous() && game.binary_actions(); }

EquilibriumReport enumerate_pne_brute_force(const Game& game, const EnumerationOptions& opt) {
  EquilibriumReport r;
  r.max_potential = -std::numeric_limits<double>::infinity();
  for_each_profile(game, opt.profile_cap, [&](const Profile& a) {
    if (is_pure_nash(game, a).is_equilibrium) {
      r.pne.push_back(a);
      r.max_potential = std::max(r.max_potential, potential(game, a));
    }
  });
  return r;
}

EquilibriumReport enumerate_pne_levels(const Game& game, const EnumerationOptions&) {
  if (!supports_level_path(game)) throw Unsupported("level path needs an anonymous technology and binary actions");
  const int n = game.players();
  const double rate = game.reward_rate();
  const auto& costs = game.config().costs;
  const std::vector<int> order = cost_order(costs);
  const Technology& tech = game.technology();

  EquilibriumReport r;
  r.level_form = true;
  r.max_potential = -std::numeric_limits<double>::infinity();
  for (int ell = 0; ell <= n; ++ell) {
    const double v = tech.eval_anonymous(ell);
    const double dv_up = ell < n ? tech.eval_anonymous(ell + 1) - v : 0.0;
    const double dv_down = ell > 0 ? v - tech.eval_anonymous(ell - 1) : 0.0;
    // Per-player feasibility of each role at this level.
    auto can_abstain = [&](double c) { return ell == n || dv_up <= 0 || leq_tol(rate, c / dv_up); };
    auto can_contribute = [&](double c) {
      if (ell == 0) return false;
      return dv_down > 0 ? leq_tol(c / dv_down, rate) : c == 0;
    };
    int forced_in = 0, free = 0;
    double forced_cost = 0.0;
    std::vector<double> free_costs;
    bool feasible = true;
    for (int p : order) {
      const double c = costs[static_cast<std::size_t>(p)];
      const bool in = can_contribute(c), out = can_abstain(c);
      if (in && out) {
        ++free;
        free_costs.push_back(c);
      } else if (in) {
        ++forced_in;
        forced_cost += c;
      } else if (!out) {
        feasible = false;
      }
    }
    if (!feasible || ell < forced_in || ell > forced_in + free) continue;
    const int pick = ell - forced_in;
    LevelClass cls;
    cls.ell = ell;
    cls.log_witnesses = numeric::log_binomial(free, pick);
    cls.witnesses = witness_count(cls.log_witnesses);
    const double cost = forced_cost + std::accumulate(free_costs.begin(), free_costs.begin() + pick, 0.0);
    cls.potential = rate * v - cost;
    r.max_potential = std::max(r.max_potential, cls.potential);
    r.pne_levels.push_back(cls);
  }
  return r;
}

EquilibriumReport enumerate_pne(const Game& game, const EnumerationOptions& opt) {
  return supports_level_path(game) ? enumerate_pne_levels(game, opt) : enumerate_pne_brute_force(game, opt);
}

EquilibriumReport potential_maximizers_brute_force(const Game& game, const EnumerationOptions& opt) {
  EquilibriumReport r = enumerate_pne_brute_force(game, opt);
  double best = -std::numeric_limits<double>::infinity();
  for_each_profile(game, opt.profile_cap, [&](const Profile& a) { best = std::max(best, potential(game, a)); });
  for_each_profile(game, opt.profile_cap, [&](const Profile& a) {
    if (potential(game, a) >= best - opt.potential_tolerance) r.potmax.push_back(a);
  });
  r.max_potential = best;
  fill_limit_distribution(r);
  return r;
}

EquilibriumReport potential_maximizers_levels(const Game& game, const EnumerationOptions& opt) {
  EquilibriumReport r = enumerate_pne_levels(game, opt);
  const int n = game.players();
  const auto& costs = game.config().costs;
  std::vector<double> sorted(costs.begin(), costs.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  double prefix = 0.0;
  for (int ell = 0; ell <= n; ++ell) {
    if (ell > 0) prefix += sorted[static_cast<std::size_t>(ell - 1)];
    phi[static_cast<std::size_t>(ell)] = game.reward_rate() * game.technology().eval_anonymous(ell) - prefix;
  }
  const double best = *std::max_element(phi.begin(), phi.end());
  for (int ell = 0; ell <= n; ++ell) {
    if (phi[static_cast<std::size_t>(ell)] < best - opt.potential_tolerance) continue;
    LevelClass cls;
    cls.ell = ell;
    cls.potential = phi[static_cast<std::size_t>(ell)];
    if (ell > 0) {
      // Only the cost-tied players at the boundary cost can be swapped.
      const double edge = sorted[static_cast<std::size_t>(ell - 1)];
      int tied = 0, tied_in = 0;
      for (int k = 0; k < n; ++k) {
        if (std::abs(sorted[static_cast<std::size_t>(k)] - edge) <= opt.potential_tolerance) {
          ++tied;
          if (k < ell) ++tied_in;
        }
      }
      cls.log_witnesses = numeric::log_binomial(tied, tied_in);
    }
    cls.witnesses = witness_count(cls.log_witnesses);
    r.potmax_levels.push_back(cls);
  }
  r.max_potential = best;
  fill_limit_distribution(r);
  return r;
}

EquilibriumReport potential_maximizers(const Game& game, const EnumerationOptions& opt) {
  return supports_level_path(game) ? potential_maximizers_levels(game, opt)
                                   : potential_maximizers_brute_force(game, opt);
}

double threshold_critical_rho(const Game& game) {
  require_threshold_uniform_binary(game);
  const auto& t = game.technology().spec();
  return game.alpha() * game.players() * t.tau / (t.v_high - t.v_low);
}

std::string_view to_string(DesignerRegimeKind kind) {
  switch (kind) {
    case DesignerRegimeKind::no_airdrop_forced:
      return "no-airdrop-forced";
    case DesignerRegimeKind::no_airdrop_optimal:
      return "no-airdrop-optimal";
    case DesignerRegimeKind::airdrop_optimal:
      return "airdrop-optimal";
  }
  return "unknown";
}

DesignerRegime threshold_designer_regime(const Game& game, double d_v, double epsilon) {
  require_threshold_uniform_binary(game);
  if (!(epsilon > 0)) throw InvalidConfig("epsilon", "must be > 0");
  const auto& t = game.technology().spec();
  const double cost = game.alpha() * game.players() * t.tau;
  const double dv = t.v_high - t.v_low;
  const double mid = dv * (1.0 - t.v_low / t.v_high);

  DesignerRegime r;
  r.rho_c = threshold_critical_rho(game);
  r.epsilon = epsilon;
  r.guaranteed_profit = t.v_low - d_v;
  if (numeric::near(cost, dv) || cost > dv) {
    r.regime = DesignerRegimeKind::no_airdrop_forced;
    r.boundary = numeric::near(cost, dv);
  } else if (numeric::near(cost, mid) || cost > mid) {
    r.regime = DesignerRegimeKind::no_airdrop_optimal;
    r.boundary = numeric::near(cost, mid);
  } else {
    r.regime = DesignerRegimeKind::airdrop_optimal;
    r.recommended_rho = std::min(r.rho_c + epsilon, 1.0);
    r.guaranteed_profit = (1.0 - r.recommended_rho) * t.v_high - d_v;
  }
  return r;
}

LinearOptimum linear_optimal_rho(std::vector<double> costs, double lambda_v, int n, double d_v) {
  if (!(lambda_v > 0)) throw InvalidConfig("technology.params.lambda_v", "must be > 0");
  if (n < 1 || costs.size() != static_cast<std::size_t>(n)) throw InvalidConfig("costs", "length must equal n");
  LinearOptimum best;
  best.order = cost_order(costs);
  std::sort(costs.begin(), costs.end());
  double best_value = 0.0;
  for (int ell = 1; ell <= n; ++ell) {
    const double c = costs[static_cast<std::size_t>(ell - 1)];
    const double rho = n * c / lambda_v;
    if (rho > 1) continue;
    const double value = (lambda_v - n * c) * ell;
    if (value <= 0) continue;
    // Strict improvement only: ties keep the earlier, cheaper rho.
    if (!leq_tol(value, best_value)) {
      best_value = value;
      best.rho_star = rho;
      best.ell_star = ell;
    }
  }
  best.profit = best_value - d_v;
  return best;
}

bool QuadraticRegime::selects_good(double rho) const { return rho > selection_rho; }

QuadraticRegime quadratic_regimes(double alpha, double tau, int n) {
  if (!(alpha >= 0)) throw InvalidConfig("alpha", "must be >= 0");
  if (!(tau > 0)) throw InvalidConfig("technology.params.tau", "must be > 0");
  if (n < 1) throw InvalidConfig("n", "must be >= 1");
  const double low = 1.0 / (tau * n), high = 1.0 / tau;
  QuadraticRegime r{};
  r.bad_pne_rho_max = alpha * tau * n;
  r.selection_rho = alpha * tau;
  if (numeric::near(alpha, low)) {
    r.region = 2;
    r.boundary = true;
  } else if (numeric::near(alpha, high)) {
    r.region = 3;
    r.boundary = true;
  } else if (alpha < low) {
    r.region = 1;
  } else if (alpha < high) {
    r.region = 2;
  } else {
    r.region = 3;
  }
  static constexpr std::string_view kText[] = {
      "bad PNE iff rho <= alpha*tau*n, otherwise only the good PNE",
      "bad and good PNE coexist for every rho; vanishing noise selects the good one iff rho > alpha*tau",
      "vanishing noise selects the bad PNE for every rho",
  };
  r.description = kText[r.region - 1];
  return r;
}

}  // namespace airdrop
