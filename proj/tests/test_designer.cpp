#include <doctest.h>

#include <cmath>

#include "airdrop/birth_death.hpp"
#include "airdrop/designer.hpp"
#include "airdrop/error.hpp"

using namespace airdrop;

namespace {

Game crowd(double beta = 1.13, double v_high = 1000, int n = 100, double v_low = 0) {
  return Game(GameConfig::binary_uniform(n, 1.0, 0.5, beta, TechnologySpec::threshold(n / 2, v_low, v_high)));
}

}  // namespace

TEST_CASE("profit curve") {
  const Game g = crowd();
  const ProfitCurve c = profit_curve(g, 0, linspace(0, 1, 101));
  REQUIRE(c.points.size() == 101);
  REQUIRE(c.b);
  CHECK(*c.b == doctest::Approx(11.3));
  REQUIRE(c.rho_bar);
  CHECK(*c.rho_bar == doctest::Approx(1 - 1 / 11.3));
  CHECK(c.closed_form_gap <= 1e-12);
  CHECK(c.points.back().profit == doctest::Approx(0).epsilon(1e-12));

  const ProfitCurve bad = profit_curve(g, 2000, linspace(0, 1, 11));
  for (const auto& p : bad.points) CHECK(p.profit < 0);

  CHECK_THROWS_AS(profit_curve(g, 0, {}), InvalidConfig);
  CHECK_THROWS_AS(profit_curve(g, 0, {0.5, 0.2}), InvalidConfig);
  CHECK_THROWS_AS(profit_curve(g, 0, {0.5, 1.2}), InvalidConfig);
}

TEST_CASE("threshold optimum") {
  const Game g = crowd();
  const OptimalRho o = optimal_rho(g, 0);
  REQUIRE(o.rho_bar);
  CHECK(o.rho_star > 0);
  CHECK(o.rho_star <= *o.rho_bar + 1e-12);
  const ProfitCurve grid = profit_curve(g, 0, linspace(0, 1, 10001));
  CHECK(o.profit_star >= grid.profit_star - 1e-9);

  // A finite difference at zero agrees with the strictly positive regime.
  const SuccessProbability sp = success_probability(g);
  const double h = 1e-6;
  const double slope = ((1 - h) * sp.at(h) - sp.at(0)) * 1000 / h;
  CHECK(o.regime == ProfitRegime::strictly_positive);
  CHECK(slope > 0);

  const OptimalRho none = optimal_rho(crowd(0.05, 1000, 100), 0);
  CHECK(none.regime == ProfitRegime::no_airdrop);
  CHECK(none.rho_star == 0.0);

  const OptimalRho low = optimal_rho(crowd(1.13, 1000, 100, 100), 0);
  CHECK(low.regime == ProfitRegime::grid_only);
}

TEST_CASE("vanishing-noise profit delegates to the regime analysis") {
  const DesignerRegime r = vanishing_noise_profit(crowd(), 10);
  CHECK(r.rho_c == doctest::Approx(1.0 * 100 * 50 / 1000));
  CHECK(r.regime == DesignerRegimeKind::no_airdrop_forced);
  CHECK(r.guaranteed_profit == doctest::Approx(-10));
}
