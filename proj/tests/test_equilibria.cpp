#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "airdrop/equilibria.hpp"
#include "airdrop/error.hpp"
#include "oracles.hpp"

using namespace airdrop;

namespace {

Game example_one(double rho = 1.0) {
  return Game(GameConfig::binary_uniform(10, 1.0, rho, 0.0, TechnologySpec::threshold(5, 0, 100), 10.0));
}

std::set<int> levels(const std::vector<LevelClass>& classes) {
  std::set<int> out;
  for (const auto& c : classes) out.insert(c.ell);
  return out;
}

std::set<int> profile_levels(const std::vector<Profile>& profiles) {
  std::set<int> out;
  for (const auto& p : profiles) out.insert(static_cast<int>(std::count(p.begin(), p.end(), 1.0)));
  return out;
}

}  // namespace

TEST_CASE("nash checks on the threshold instance") {
  const Game g = example_one();
  CHECK(is_pure_nash(g, level_profile(10, 5)).is_equilibrium);
  const NashCheck four = is_pure_nash(g, level_profile(10, 4));
  CHECK_FALSE(four.is_equilibrium);
  REQUIRE(four.deviation);
  CHECK(four.deviation->to == 0);
  CHECK(is_pure_nash(g, level_profile(10, 0)).is_equilibrium);
  CHECK(levels(enumerate_pne(g).pne_levels) == std::set<int>{0, 5});
}

TEST_CASE("AND game equilibria and potential maximizers") {
  const Game g(GameConfig::binary_uniform(2, 1.0, 1.0, 1.0, TechnologySpec::from_table({0, 0, 8})));
  CHECK_FALSE(is_pure_nash(g, Profile{1, 0}).is_equilibrium);
  CHECK_FALSE(is_pure_nash_by_deviation(g, Profile{1, 0}).is_equilibrium);
  const EquilibriumReport bf = potential_maximizers_brute_force(g);
  CHECK(bf.pne == std::vector<Profile>{{0, 0}, {1, 1}});
  CHECK(bf.potmax == std::vector<Profile>{{1, 1}});
  CHECK(bf.limit_distribution == std::vector<double>{1.0});
}

TEST_CASE("linear technology below the reward threshold has only the zero profile") {
  const Game g(GameConfig::binary_uniform(6, 1.0, 0.5, 0.0, TechnologySpec::linear(2)));
  const EquilibriumReport r = enumerate_pne_brute_force(g);
  CHECK(r.pne == std::vector<Profile>{Profile(6, 0.0)});
}

TEST_CASE("potential maximizers at the critical reward") {
  const Game g = example_one(0.5);
  const EquilibriumReport r = potential_maximizers_brute_force(g);
  CHECK(r.potmax.size() == 253);
  CHECK(profile_levels(r.potmax) == std::set<int>{0, 5});
  const EquilibriumReport fast = potential_maximizers_levels(g);
  REQUIRE(fast.potmax_levels.size() == 2);
  CHECK(fast.potmax_levels[1].witnesses == 252);
  CHECK(fast.level_limit_distribution[1] == doctest::Approx(252.0 / 253.0));

  const Game zero = example_one(0.0);
  CHECK(potential_maximizers_brute_force(zero).potmax == std::vector<Profile>{Profile(10, 0.0)});
}

TEST_CASE("fast path matches brute force on random heterogeneous games") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 7);
    GameConfig c;
    c.n = n;
    c.rho = std::round(u(gen) * 20) / 20;
    for (int i = 0; i < n; ++i) c.costs.push_back(rep % 3 == 0 ? 0.5 : std::round(u(gen) * 8) / 4);
    if (rep % 2 == 0) {
      c.technology = TechnologySpec::threshold(1 + static_cast<int>(gen() % n), 0, std::round(u(gen) * 40));
      if (c.technology.v_high <= 0) c.technology.v_high = 1;
    } else {
      std::vector<double> t{0};
      for (int l = 1; l <= n; ++l) t.push_back(t.back() + std::round(u(gen) * 6));
      c.technology = TechnologySpec::from_table(t);
    }
    const Game g(c);
    const EquilibriumReport fast = potential_maximizers_levels(g);
    const EquilibriumReport bf = potential_maximizers_brute_force(g);
    double fast_count = 0;
    for (const auto& cls : fast.pne_levels) fast_count += cls.witnesses;
    CHECK(fast_count == static_cast<double>(bf.pne.size()));
    CHECK(levels(fast.pne_levels) == profile_levels(bf.pne));
    CHECK(levels(fast.potmax_levels) == profile_levels(bf.potmax));
    for (const auto& p : bf.pne) CHECK(is_pure_nash_by_deviation(g, p).is_equilibrium);
  }
}

TEST_CASE("brute force respects the profile cap") {
  GameConfig c = GameConfig::binary_uniform(12, 1.0, 0.5, 0.0, TechnologySpec::threshold(5, 0, 100));
  EnumerationOptions opt;
  opt.profile_cap = 100;
  CHECK_THROWS_AS(enumerate_pne_brute_force(Game(c), opt), ResourceLimit);
}

TEST_CASE("critical reward and designer regimes") {
  CHECK(threshold_critical_rho(example_one()) == doctest::Approx(0.5));
  const Game infeasible(GameConfig::binary_uniform(10, 1.0, 0.5, 0.0, TechnologySpec::threshold(5, 0, 40)));
  CHECK(threshold_critical_rho(infeasible) == doctest::Approx(1.25));

  // alpha n tau = 30, V_low = 50, V_high = 100.
  const Game mid(GameConfig::binary_uniform(10, 1.0, 0.5, 0.0, TechnologySpec::threshold(3, 50, 100)));
  CHECK(threshold_designer_regime(mid, 0).regime == DesignerRegimeKind::no_airdrop_optimal);
  // alpha n tau = 60 > dV = 50.
  const Game forced(GameConfig::binary_uniform(10, 1.0, 0.5, 0.0, TechnologySpec::threshold(6, 50, 100)));
  const DesignerRegime f = threshold_designer_regime(forced, 5);
  CHECK(f.regime == DesignerRegimeKind::no_airdrop_forced);
  CHECK(f.guaranteed_profit == doctest::Approx(45));
  const DesignerRegime good = threshold_designer_regime(example_one(), 0);
  CHECK(good.regime == DesignerRegimeKind::airdrop_optimal);
  CHECK(good.recommended_rho == doctest::Approx(0.501));
  CHECK(good.guaranteed_profit == doctest::Approx(49.9));
  // With V_low = 0 a single transition at alpha n tau = dV, flagged as boundary.
  const Game edge(GameConfig::binary_uniform(10, 1.0, 0.5, 0.0, TechnologySpec::threshold(5, 0, 50)));
  const DesignerRegime e = threshold_designer_regime(edge, 0);
  CHECK(e.boundary);
}

TEST_CASE("linear designer optimum") {
  const LinearOptimum all = linear_optimal_rho(std::vector<double>(4, 1.0), 8.0, 4);
  CHECK(all.ell_star == 4);
  CHECK(all.rho_star == doctest::Approx(0.5));
  CHECK(all.profit == doctest::Approx(32 - 16));
  const LinearOptimum none = linear_optimal_rho(std::vector<double>(4, 1.0), 3.0, 4);
  CHECK(none.ell_star == 0);
  CHECK(none.rho_star == 0);
  const LinearOptimum tie = linear_optimal_rho({10, 1, 2}, 9.0, 3);
  CHECK(tie.ell_star == 1);
  CHECK(tie.rho_star == doctest::Approx(1.0 / 3.0));
  CHECK(tie.profit == doctest::Approx(6));
}

TEST_CASE("quadratic regions") {
  CHECK(quadratic_regimes(0.0005, 10, 100).region == 1);
  const QuadraticRegime two = quadratic_regimes(0.01, 10, 100);
  CHECK(two.region == 2);
  CHECK(two.selects_good(0.5));
  CHECK_FALSE(two.selects_good(0.05));
  CHECK(quadratic_regimes(0.2, 10, 100).region == 3);
  CHECK(quadratic_regimes(0.1, 10, 100).boundary);

  // Region 2 selection against level-form potential maximization (n = 20).
  const Game g(GameConfig::binary_uniform(20, 0.05, 0.5, 0.0, TechnologySpec::quadratic(4)));
  CHECK(levels(potential_maximizers_levels(g).potmax_levels) == std::set<int>{20});
  const Game g3(GameConfig::binary_uniform(20, 0.3, 1.0, 0.0, TechnologySpec::quadratic(4)));
  CHECK(levels(potential_maximizers_levels(g3).potmax_levels) == std::set<int>{0});
}
