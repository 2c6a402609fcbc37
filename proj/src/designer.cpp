#include "airdrop/designer.hpp"

#include <algorithm>
#include <cmath>

#include "airdrop/error.hpp"
#include "airdrop/numeric.hpp"

namespace airdrop {

namespace {

bool is_threshold(const Game& game) { return game.technology().kind() == TechnologyKind::threshold; }

// Closed form V_high (1 - rho) / (1 + C e^(-rho B)) - d_V, V_low = 0.
double threshold_profit(const SuccessProbability& sp, double v_high, double rho, double d_v) {
  return v_high * (1.0 - rho) * sp.at(rho) - d_v;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> linspace(double from, double to, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {from};
  std::vector<double> xs(points);
  for (std::size_t k = 0; k < points; ++k)
    xs[k] = from + (to - from) * static_cast<double>(k) / static_cast<double>(points - 1);
  xs.back() = to;
  return xs;
}

ProfitCurve profit_curve(const Game& game, double d_v, const std::vector<double>& rho_grid) {
  if (rho_grid.empty()) throw InvalidConfig("rho_grid", "must be nonempty");
  if (!(game.beta() > 0)) throw InvalidConfig("beta", "profit curves need beta > 0");
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    if (!(rho_grid[k] >= 0 && rho_grid[k] <= 1)) throw InvalidConfig("rho_grid", "entries must lie in [0, 1]");
    if (k > 0 && !(rho_grid[k - 1] < rho_grid[k])) throw InvalidConfig("rho_grid", "must be strictly ascending");
  }
  ProfitCurve curve;
  const bool threshold = is_threshold(game);
  std::optional<SuccessProbability> sp;
  if (threshold) {
    sp = success_probability(game);
    curve.b = sp->b;
    curve.c = sp->c;
    if (sp->b > 1) curve.rho_bar = 1.0 - 1.0 / sp->b;
  }
  const bool closed = threshold && game.technology().spec().v_low == 0.0;
  for (double rho : rho_grid) {
    const Game g = game.with_rho(rho);
    const StationaryLaw law = stationary(g);
    ProfitPoint pt;
    pt.rho = rho;
    pt.value = law.expected_value;
    pt.p_high = law.p_high;
    pt.profit = (1.0 - rho) * pt.value - d_v;
    if (closed) {
      const double cf = threshold_profit(*sp, game.technology().spec().v_high, rho, d_v);
      const double scale = std::max({std::abs(cf), std::abs(pt.profit), 1e-300});
      curve.closed_form_gap = std::max(curve.closed_form_gap, std::abs(cf - pt.profit) / scale);
    }
    curve.points.push_back(pt);
  }
  for (std::size_t k = 1; k < curve.points.size(); ++k)
    if (curve.points[k].profit > curve.points[curve.argmax].profit) curve.argmax = k;
  curve.rho_star = curve.points[curve.argmax].rho;
  curve.profit_star = curve.points[curve.argmax].profit;
  return curve;
}

std::string_view to_string(ProfitRegime regime) {
  switch (regime) {
    case ProfitRegime::no_airdrop:
      return "no-airdrop";
    case ProfitRegime::capped:
      return "capped";
    case ProfitRegime::strictly_positive:
      return "strictly-positive";
    case ProfitRegime::grid_only:
      return "grid-only";
  }
  return "unknown";
}

OptimalRho optimal_rho(const Game& game, double d_v) {
  if (!is_threshold(game)) throw Unsupported("optimal_rho requires a threshold technology");
  if (!(game.beta() > 0)) throw InvalidConfig("beta", "optimal_rho needs beta > 0");
  const auto& spec = game.technology().spec();
  const SuccessProbability sp = success_probability(game);
  const int n = game.players();

  OptimalRho r;
  r.b = sp.b;
  r.c = sp.c;
  r.p_high_zero = sp.at(0.0);

  if (spec.v_low != 0.0) {
    const ProfitCurve curve = profit_curve(game, d_v, linspace(0.0, 1.0, kOptimizerGridPoints));
    r.regime = ProfitRegime::grid_only;
    r.rho_star = curve.rho_star;
    r.profit_star = curve.profit_star;
    r.p_high_star = sp.at(r.rho_star);
    return r;
  }

  const double v_high = spec.v_high;
  auto profit = [&](double rho) { return threshold_profit(sp, v_high, rho, d_v); };
  if (n >= game.beta() * v_high) {
    r.regime = ProfitRegime::no_airdrop;
    r.rho_star = 0.0;
    r.profit_star = v_high * r.p_high_zero - d_v;
    r.p_high_star = r.p_high_zero;
    return r;
  }
  r.regime = n < game.beta() * v_high * (1.0 - r.p_high_zero) ? ProfitRegime::strictly_positive
                                                                : ProfitRegime::capped;
  const double rho_bar = 1.0 - 1.0 / sp.b;
  r.rho_bar = rho_bar;
  r.p_high_bar = sp.at(rho_bar);

  // Grid scan over [0, 1] guards against multiple local maxima; the golden
  // section then refines inside the best grid cell and over [0, rho_bar].
  const std::vector<double> grid = linspace(0.0, 1.0, kOptimizerGridPoints);
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (profit(grid[k]) > profit(grid[best])) best = k;
  double rho_star = grid[best];
  const double lo = grid[best > 0 ? best - 1 : 0];
  const double hi = std::min(grid[std::min(best + 1, grid.size() - 1)], rho_bar);
  for (double cand : {golden_section_max(profit, lo, std::max(lo, hi), 1e-10),
                      golden_section_max(profit, 0.0, rho_bar, 1e-10)}) {
    if (profit(cand) > profit(rho_star)) rho_star = cand;
  }
  r.rho_star = rho_star;
  r.profit_star = profit(rho_star);
  r.p_high_star = sp.at(rho_star);
  return r;
}

DesignerRegime vanishing_noise_profit(const Game& game, double d_v, double epsilon) {
  return threshold_designer_regime(game, d_v, epsilon);
}

}  // namespace airdrop
