#include "airdrop/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "airdrop/birth_death.hpp"
#include "airdrop/designer.hpp"
#include "airdrop/dynamics.hpp"
#include "airdrop/equilibria.hpp"
#include "airdrop/error.hpp"

namespace airdrop {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCategory::schema, "experiment." + field + ": " + what);
}

double p_number(const json& p, const char* key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  if (!it->is_number()) schema_error(key, "expected a number");
  return it->get<double>();
}

std::uint64_t p_count(const json& p, const char* key, std::uint64_t fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  if (it->is_number_unsigned() || (it->is_number_integer() && it->get<long long>() >= 0))
    return it->get<std::uint64_t>();
  if (it->is_number_float() && it->get<double>() >= 0 && std::floor(it->get<double>()) == it->get<double>())
    return static_cast<std::uint64_t>(it->get<double>());
  schema_error(key, "expected a nonnegative integer");
}

std::vector<double> p_numbers(const json& p, const char* key, std::vector<double> fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  if (!it->is_array()) schema_error(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) schema_error(key, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Either an explicit list or {"from", "to", "points"}.
std::vector<double> p_grid(const json& p, const char* key, std::vector<double> fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  if (it->is_object()) {
    const double from = p_number(*it, "from", 0.0), to = p_number(*it, "to", 1.0);
    const auto points = p_count(*it, "points", 101);
    if (points == 0) throw InvalidConfig(std::string("experiment.") + key + ".points", "must be >= 1");
    return linspace(from, to, points);
  }
  auto grid = p_numbers(p, key, {});
  if (grid.empty()) throw InvalidConfig(std::string("experiment.") + key, "must be nonempty");
  return grid;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Game with_alpha(const Game& game, double alpha) {
  GameConfig c = game.config();
  c.costs.assign(c.costs.size(), alpha);
  return Game(std::move(c));
}

bool is_threshold(const Game& g) { return g.technology().kind() == TechnologyKind::threshold; }
int threshold_tau(const Game& g) { return static_cast<int>(g.technology().spec().tau); }

bool lumpable(const Game& g) { return g.anonymous() && g.binary_actions() && g.uniform_costs(); }

class Writer {
 public:
  Writer(std::filesystem::path dir, OutputFormat format, bool reproducible, std::string hash, ExperimentKind kind)
      : dir_(std::move(dir)), format_(format), reproducible_(reproducible), hash_(std::move(hash)), kind_(kind) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCategory::io, "cannot create output directory " + dir_.string());
    if (!reproducible_) stamp_ = utc_timestamp();
  }

  // Writes `stem`.csv or `stem`.json depending on the format.
  std::string table(const std::string& stem, Table t, std::optional<OutputFormat> force = std::nullopt) {
    const OutputFormat f = force.value_or(format_);
    if (f == OutputFormat::json) {
      json doc = header();
      for (const auto& c : t.comments) doc["notes"].push_back(c);
      doc["columns"] = t.columns;
      doc["rows"] = to_json_rows(t);
      return write(stem + ".json", doc.dump(2) + "\n");
    }
    t.comments.insert(t.comments.begin(), header_line());
    return write(stem + ".csv", to_csv(t, reproducible_));
  }

  std::string document(const std::string& stem, json body) {
    json doc = header();
    doc.update(body);
    return write(stem + ".json", doc.dump(2) + "\n");
  }

  json header() const {
    json h = {{"tool", "airdrop-lab"}, {"experiment", std::string(to_string(kind_))}, {"config_hash", hash_}};
    if (!reproducible_) h["generated_at"] = stamp_;
    return h;
  }

 private:
  std::string header_line() const {
    std::string s = "airdrop-lab " + std::string(to_string(kind_)) + " config_hash=" + hash_;
    if (!reproducible_) s += " generated_at=" + stamp_;
    return s;
  }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
    out << text;
    return path.string();
  }

  std::filesystem::path dir_;
  OutputFormat format_;
  bool reproducible_;
  std::string hash_;
  ExperimentKind kind_;
  std::string stamp_;
};

Cell opt_cell(const std::optional<double>& x) { return x ? Cell{*x} : Cell{}; }

json level_json(const std::vector<LevelClass>& levels) {
  json out = json::array();
  for (const auto& c : levels)
    out.push_back({{"ell", c.ell}, {"witnesses", c.witnesses}, {"log_witnesses", c.log_witnesses},
                   {"potential", c.potential}});
  return out;
}

json regime_json(const DesignerRegime& r) {
  return {{"regime", std::string(to_string(r.regime))},
          {"rho_c", r.rho_c},
          {"recommended_rho", r.recommended_rho},
          {"guaranteed_profit", r.guaranteed_profit},
          {"epsilon", r.epsilon},
          {"boundary", r.boundary}};
}

json run_equilibria(const Game& game, const json& p, Writer& w) {
  EnumerationOptions opt;
  opt.profile_cap = p_count(p, "profile_cap", opt.profile_cap);
  opt.potential_tolerance = p_number(p, "tolerance", opt.potential_tolerance);
  const double eps = p_number(p, "epsilon", 1e-3);
  const EquilibriumReport r = potential_maximizers(game, opt);

  json body;
  body["max_potential"] = r.max_potential;
  if (r.level_form) {
    body["path"] = "levels";
    body["pne"] = level_json(r.pne_levels);
    body["potmax"] = level_json(r.potmax_levels);
    body["limit_distribution"] = r.level_limit_distribution;
  } else {
    body["path"] = "profiles";
    body["pne"] = r.pne;
    body["potmax"] = r.potmax;
    body["limit_distribution"] = r.limit_distribution;
  }
  const auto& spec = game.technology().spec();
  if (is_threshold(game) && game.binary_actions() && game.uniform_costs()) {
    body["threshold"] = regime_json(threshold_designer_regime(game, game.config().d_v, eps));
  }
  if (game.technology().kind() == TechnologyKind::quadratic && game.uniform_costs()) {
    const QuadraticRegime q = quadratic_regimes(game.alpha(), spec.tau, game.players());
    body["quadratic"] = {{"region", q.region},
                         {"boundary", q.boundary},
                         {"description", std::string(q.description)},
                         {"selects_good", q.selects_good(game.rho())}};
  }
  if (game.technology().kind() == TechnologyKind::linear && game.binary_actions()) {
    const LinearOptimum lo = linear_optimal_rho(game.config().costs, spec.lambda_v, game.players(), game.config().d_v);
    body["linear_optimum"] = {{"rho_star", lo.rho_star}, {"ell_star", lo.ell_star}, {"profit", lo.profit}};
  }
  const std::string path = w.document("equilibria", body);
  json summary = body;
  summary["artifacts"] = {path};
  return summary;
}

json run_stationary(const Game& game, Writer& w) {
  const BirthDeathChain ch = build_chain(game);
  const StationaryLaw law = stationary(game);
  Table t;
  t.columns = {"ell", "log_weight", "prob"};
  for (int l = 0; l <= ch.n; ++l)
    t.rows.push_back({std::int64_t{l}, ch.log_weight[static_cast<std::size_t>(l)], law.prob(l)});
  json summary = {{"log_z", ch.log_z}, {"mean_level", law.mean_level}, {"expected_value", law.expected_value}};
  if (law.p_high) summary["p_high"] = *law.p_high;
  summary["artifacts"] = {w.table("stationary", t)};
  return summary;
}

json run_simulate(const Game& game, const json& p, std::uint64_t seed, Writer& w) {
  const auto steps = p_count(p, "steps", 10'000);
  const auto stride = p_count(p, "stride", 1);
  std::vector<std::uint64_t> seeds{seed};
  if (auto it = p.find("seeds"); it != p.end()) {
    seeds.clear();
    if (!it->is_array() || it->empty()) schema_error("seeds", "expected a nonempty array");
    for (const auto& s : *it) {
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        schema_error("seeds", "expected unsigned integers");
      seeds.push_back(s.get<std::uint64_t>());
    }
  }
  const bool rho_sweep = p.contains("rhos");
  const std::vector<double> rhos = p_numbers(p, "rhos", {game.rho()});
  std::optional<Profile> initial;
  if (p.contains("initial")) initial = p_numbers(p, "initial", {});

  json summary;
  summary["runs"] = json::array();
  summary["artifacts"] = json::array();
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    const Game g = game.with_rho(rhos[r]);
    for (std::uint64_t s : seeds) {
      const TrajectoryRecord rec = run_trajectory(g, steps, s, stride, initial);
      Table t;
      t.columns = {"step", "ell", "value", "potential"};
      double mean_ell = 0.0;
      for (const auto& pt : rec.points) {
        t.rows.push_back({static_cast<std::int64_t>(pt.step), pt.ell, pt.value, pt.potential});
        mean_ell += pt.ell;
      }
      mean_ell /= static_cast<double>(rec.points.size());
      std::string stem = "trajectory";
      if (rho_sweep) stem += "_rho" + std::to_string(r);
      stem += "_seed" + std::to_string(s);
      json run = {{"rho", rhos[r]}, {"seed", s}, {"final_ell", rec.points.back().ell}, {"mean_ell", mean_ell}};
      if (is_threshold(g)) {
        // Share of recorded points at or above tau after the first such point.
        const double tau = g.technology().spec().tau;
        std::size_t first = rec.points.size(), above = 0;
        for (std::size_t k = 0; k < rec.points.size(); ++k) {
          if (rec.points[k].ell >= tau) {
            if (first == rec.points.size()) first = k;
            ++above;
          }
        }
        run["first_hit_step"] = first < rec.points.size() ? json(rec.points[first].step) : json(nullptr);
        run["post_hit_occupancy"] =
            first < rec.points.size() ? json(static_cast<double>(above) / static_cast<double>(rec.points.size() - first))
                                      : json(nullptr);
      }
      run["artifact"] = w.table(stem, t);
      summary["artifacts"].push_back(run["artifact"]);
      summary["runs"].push_back(run);
    }
  }
  return summary;
}

json run_hitting(const Game& game, const json& p, std::uint64_t seed, Writer& w) {
  int target;
  if (p.contains("target"))
    target = static_cast<int>(p_count(p, "target", 0));
  else if (is_threshold(game))
    target = threshold_tau(game);
  else
    schema_error("target", "required for non-threshold technologies");
  const auto trials = static_cast<int>(p_count(p, "trials", 100));
  const auto cap = p_count(p, "cap", kDefaultHittingCap);
  const HittingEstimate est = estimate_hitting_time(game, target, trials, cap, seed);

  json body = {{"target", est.target},       {"trials", est.trials}, {"successes", est.successes},
               {"censored", est.censored},   {"cap", est.cap},       {"mean", est.mean},
               {"std_error", est.std_error}, {"ci95_low", est.ci_low}, {"ci95_high", est.ci_high},
               {"seed", seed}};
  if (lumpable(game)) {
    const HittingTime exact = expected_hitting_exact(game, 0, target);
    body["exact_mean"] = exact.finite ? json(exact.value) : json(nullptr);
  }
  Table t;
  t.columns = {"trial", "steps", "censored"};
  for (std::size_t k = 0; k < est.per_trial.size(); ++k) {
    const auto s = est.per_trial[k];
    t.rows.push_back({static_cast<std::int64_t>(k), s >= 0 ? Cell{s} : Cell{}, std::int64_t{s < 0 ? 1 : 0}});
  }
  json summary = body;
  summary["artifacts"] = {w.document("hitting", body), w.table("hitting_trials", t)};
  return summary;
}

json run_phase(const Game& game, const json& p, Writer& w) {
  const std::vector<double> grid = p_grid(p, "rho_grid", linspace(0.0, 1.0, 101));
  const SuccessProbability sp = success_probability(game);
  const double rho_c = threshold_critical_rho(game);
  Table t;
  t.columns = {"rho", "p_high", "side"};
  t.comments.push_back("rho_c=" + format_double(rho_c, true));
  std::optional<double> crossing;
  double prev_rho = 0.0, prev_p = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double rho = grid[k], ph = sp.at(rho);
    const char* side = rho < rho_c ? "below" : (rho > rho_c ? "above" : "at");
    t.rows.push_back({rho, ph, std::string(side)});
    if (!crossing && ph >= 0.5)
      crossing = k == 0 ? rho : prev_rho + (0.5 - prev_p) * (rho - prev_rho) / (ph - prev_p);
    prev_rho = rho;
    prev_p = ph;
  }
  json summary = {{"rho_c", rho_c}, {"b", sp.b}, {"c", sp.c}, {"log_c", sp.log_c}};
  summary["half_crossing_rho"] = crossing ? json(*crossing) : json(nullptr);
  summary["artifacts"] = {w.table("phase", t)};
  return summary;
}

json run_profit(const Game& game, const json& p, Writer& w) {
  const std::vector<double> grid = p_grid(p, "rho_grid", linspace(0.0, 1.0, 101));
  const double d_v = game.config().d_v;
  const ProfitCurve curve = profit_curve(game, d_v, grid);
  Table t;
  t.columns = {"rho", "p_high", "value", "profit"};
  for (const auto& pt : curve.points) t.rows.push_back({pt.rho, opt_cell(pt.p_high), pt.value, pt.profit});

  json meta = {{"grid_rho_star", curve.rho_star}, {"grid_profit_star", curve.profit_star}, {"d_v", d_v}};
  auto put = [&](const char* k, const std::optional<double>& v) { meta[k] = v ? json(*v) : json(nullptr); };
  put("b", curve.b);
  put("c", curve.c);
  put("rho_bar", curve.rho_bar);
  if (is_threshold(game) && game.uniform_costs() && game.binary_actions()) {
    const OptimalRho opt = optimal_rho(game, d_v);
    meta["rho_star"] = opt.rho_star;
    meta["profit_star"] = opt.profit_star;
    meta["regime"] = std::string(to_string(opt.regime));
    meta["p_high_star"] = opt.p_high_star;
    meta["vanishing_noise"] = regime_json(vanishing_noise_profit(game, d_v, p_number(p, "epsilon", 1e-3)));
  }
  json summary = meta;
  summary["artifacts"] = {w.table("profit", t), w.document("profit_meta", meta)};
  return summary;
}

json run_times(const Game& game, const json& p, std::uint64_t seed, Writer& w) {
  const std::vector<double> alphas = p_numbers(p, "alphas", {game.alpha()});
  const int mc_trials = static_cast<int>(p_count(p, "mc_trials", 0));
  const auto cap = p_count(p, "cap", kDefaultHittingCap);
  const int n = game.players();
  const bool threshold = is_threshold(game);
  Table t;
  t.columns = {"alpha",        "alpha_beta",   "ell_star",       "ell0",          "t_cutoff",
               "t_mix_lower",  "t_mix_upper",  "exact_hit_ell_star", "ub_hit_ell_star", "exact_hit_tau",
               "lb_hit_tau_level", "lb_hit_tau_ell_star", "mixing_lb_proof", "mixing_lb_statement",
               "mixing_lb_applicable", "mc_hit_tau_mean", "mc_hit_tau_std_error"};
  if (threshold)
    t.comments.push_back("mixing lower bound: proof form exp(ab(tau-1))/C(n,tau-1); statement form "
                         "exp(ab)exp(tau-1)/C(n,tau-1)");
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const Game g = with_alpha(game, alphas[k]);
    const BirthDeathChain ch = build_chain(g);
    const CutoffReport cut = t_cutoff(ch);
    const double ls = ell_star(g);
    const int ls_up = std::min(n, static_cast<int>(std::ceil(ls)));
    std::vector<Cell> row = {alphas[k], alphas[k] * g.beta(), ls, std::int64_t{cut.ell0}, cut.t_cutoff,
                             cut.mixing_lower, cut.mixing_upper};
    row.push_back(expected_hitting_exact(ch, 0, ls_up).value);
    row.push_back(ls < n ? Cell{(ls + 1) * n * n / (n - ls)} : Cell{});
    if (threshold) {
      const int tau = threshold_tau(g);
      row.push_back(expected_hitting_exact(ch, 0, tau).value);
      double lb = 0.0;
      for (int l = 0; l <= tau && l < n; ++l) lb = std::max(lb, threshold_hitting_bound_at(g, l));
      row.push_back(lb);
      row.push_back(threshold_hitting_bound_ell_star(g));
      const MixingLowerBound m = mixing_lower_bound_threshold(g);
      row.push_back(m.proof_form);
      row.push_back(m.statement_form);
      row.push_back(std::int64_t{m.applicable ? 1 : 0});
      if (mc_trials > 0) {
        const HittingEstimate est = estimate_hitting_time(g, tau, mc_trials, cap, seed + k);
        row.push_back(est.mean);
        row.push_back(est.std_error);
      } else {
        row.insert(row.end(), 2, Cell{});
      }
    } else {
      row.insert(row.end(), 8, Cell{});
    }
    t.rows.push_back(std::move(row));
  }
  json summary = {{"rows", to_json_rows(t)}};
  summary["artifacts"] = {w.table("times", t)};
  return summary;
}

}  // namespace

std::string format_double(double x, bool fixed_precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = fixed_precision ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17)
                                   : std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table, bool fixed_precision) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + table.columns[k];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ",";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>)
              out += std::to_string(v);
            else if constexpr (std::is_same_v<T, double>)
              out += format_double(v, fixed_precision);
            else if constexpr (std::is_same_v<T, std::string>)
              out += v;
          },
          row[k]);
    }
    out += "\n";
  }
  return out;
}

json to_json_rows(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t k = 0; k < row.size() && k < table.columns.size(); ++k) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
              obj[table.columns[k]] = nullptr;
            else if constexpr (std::is_same_v<T, double>)
              obj[table.columns[k]] = std::isfinite(v) ? json(v) : json(format_double(v, false));
            else
              obj[table.columns[k]] = v;
          },
          row[k]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

json run_experiment(ExperimentKind kind, const ExperimentConfig& config, const RunOptions& options) {
  const Game game(config.game);
  const std::optional<std::uint64_t> seed = options.seed ? options.seed : config.seed;
  if (is_stochastic(kind) && !seed) throw InvalidConfig("experiment.seed", "stochastic experiments need a seed");

  json resolved = config.document;
  resolved.erase("output");
  resolved["experiment"]["kind"] = std::string(to_string(kind));
  if (seed) resolved["experiment"]["seed"] = *seed;
  const std::string hash = config_hash(resolved);

  Writer w(options.out_dir.value_or(config.out_dir), options.format.value_or(config.format), options.reproducible,
           hash, kind);
  const json& p = config.params;
  json summary;
  switch (kind) {
    case ExperimentKind::equilibria:
      summary = run_equilibria(game, p, w);
      break;
    case ExperimentKind::stationary:
      summary = run_stationary(game, w);
      break;
    case ExperimentKind::simulate:
      summary = run_simulate(game, p, *seed, w);
      break;
    case ExperimentKind::hitting:
      summary = run_hitting(game, p, *seed, w);
      break;
    case ExperimentKind::phase:
      summary = run_phase(game, p, w);
      break;
    case ExperimentKind::profit:
      summary = run_profit(game, p, w);
      break;
    case ExperimentKind::times:
      summary = run_times(game, p, seed.value_or(0), w);
      break;
  }
  json out = w.header();
  out.update(summary);
  return out;
}

}  // namespace airdrop
