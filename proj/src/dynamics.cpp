#include "airdrop/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "airdrop/birth_death.hpp"
#include "airdrop/error.hpp"
#include "airdrop/numeric.hpp"

namespace airdrop {

namespace {

constexpr double kLevelSlack = 1e-9;

// V with player i switched to x, given the cached level.
double value_with(const Game& game, DynamicsState& s, int i, double x) {
  const auto k = static_cast<std::size_t>(i);
  if (game.anonymous()) return game.technology().eval_level(std::max(0.0, s.ell - s.profile[k] + x));
  const double old = s.profile[k];
  s.profile[k] = x;
  const double v = game.value(s.profile);
  s.profile[k] = old;
  return v;
}

// Writes normalized logit probabilities and the corresponding values.
void logit_into(const Game& game, DynamicsState& s, int i, std::span<double> probs, std::span<double> values) {
  const auto actions = game.actions(i);
  const double rate = game.reward_rate(), c = game.cost(i), beta = game.beta();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < actions.size(); ++k) {
    values[k] = value_with(game, s, i, actions[k]);
    probs[k] = beta * (rate * values[k] - c * actions[k]);
    hi = std::max(hi, probs[k]);
  }
  if (actions.size() == 2) {
    probs[0] = numeric::logistic(probs[0] - probs[1]);
    probs[1] = 1.0 - probs[0];
    return;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < actions.size(); ++k) total += probs[k] = std::exp(probs[k] - hi);
  for (std::size_t k = 0; k < actions.size(); ++k) probs[k] /= total;
}

void apply(const Game& game, DynamicsState& s, int i, double x, double value) {
  const auto k = static_cast<std::size_t>(i);
  if (game.binary_actions())
    s.ell += x - s.profile[k];
  s.profile[k] = x;
  if (!game.binary_actions()) s.ell = std::accumulate(s.profile.begin(), s.profile.end(), 0.0);
  s.value = value;
}

template <typename Fn>
void parallel_trials(int count, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int k = static_cast<int>(w); k < count; k += static_cast<int>(workers)) fn(k);
    });
}

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

SampleStats summarize(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  numeric::CompensatedSum sum;
  for (double x : xs) sum.add(x);
  s.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    numeric::CompensatedSum sq;
    for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
    const double var = sq.value() / static_cast<double>(xs.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return s;
}

// Runs until the level reaches `target` or `cap` steps elapse.
bool run_until_hit(const Game& game, DynamicsState& s, Rng& rng, int target, std::uint64_t cap) {
  while (s.ell < target - kLevelSlack) {
    if (s.step >= cap) return false;
    step(game, s, rng);
  }
  return true;
}

}  // namespace

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AIRDROP_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::vector<double> logit_response(const Game& game, const Profile& profile, int i) {
  game.check_profile(profile);
  if (i < 0 || i >= game.players()) throw InvalidConfig("i", "player index out of range");
  DynamicsState s = make_state(game, profile);
  const std::size_t m = game.actions(i).size();
  std::vector<double> probs(m), values(m);
  logit_into(game, s, i, probs, values);
  return probs;
}

DynamicsState make_state(const Game& game, const std::optional<Profile>& initial) {
  DynamicsState s;
  if (initial) {
    game.check_profile(*initial);
    s.profile = *initial;
  } else {
    s.profile.assign(static_cast<std::size_t>(game.players()), 0.0);
    for (int i = 0; i < game.players(); ++i) s.profile[static_cast<std::size_t>(i)] = game.actions(i)[0];
  }
  s.ell = std::accumulate(s.profile.begin(), s.profile.end(), 0.0);
  s.value = game.value(s.profile);
  return s;
}

void step(const Game& game, DynamicsState& s, Rng& rng) {
  const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(game.players())));
  const auto actions = game.actions(i);
  const std::size_t m = actions.size();
  std::array<double, 16> pbuf{}, vbuf{};
  std::vector<double> pheap, vheap;
  std::span<double> probs(pbuf.data(), std::min<std::size_t>(m, 16)), values(vbuf.data(), probs.size());
  if (m > 16) {
    pheap.resize(m);
    vheap.resize(m);
    probs = pheap;
    values = vheap;
  }
  logit_into(game, s, i, probs, values);
  const double u = rng.uniform();
  std::size_t pick = m - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    acc += probs[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  apply(game, s, i, actions[pick], values[pick]);
  ++s.step;
}

TrajectoryRecord run_trajectory(const Game& game, std::uint64_t steps, std::uint64_t seed, std::uint64_t stride,
                                const std::optional<Profile>& initial) {
  if (steps < 1) throw InvalidConfig("steps", "must be >= 1");
  if (stride < 1) throw InvalidConfig("stride", "must be >= 1");
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.stride = stride;
  Rng rng(seed);
  DynamicsState s = make_state(game, initial);
  auto record = [&] {
    rec.points.push_back({s.step, s.ell, s.value, potential(game, s.profile)});
  };
  record();
  while (s.step < steps) {
    step(game, s, rng);
    if (s.step % stride == 0 || s.step == steps) record();
  }
  return rec;
}

HittingEstimate estimate_hitting_time(const Game& game, int target, int trials, std::uint64_t cap,
                                      std::uint64_t seed) {
  if (target < 0 || target > game.players()) throw InvalidConfig("target", "must lie in [0, n]");
  if (trials < 1) throw InvalidConfig("trials", "must be >= 1");
  HittingEstimate est;
  est.target = target;
  est.trials = trials;
  est.cap = cap;
  est.per_trial.assign(static_cast<std::size_t>(trials), -1);
  parallel_trials(trials, [&](int k) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
    DynamicsState s = make_state(game);
    if (run_until_hit(game, s, rng, target, cap))
      est.per_trial[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(s.step);
  });
  std::vector<double> hits;
  for (auto t : est.per_trial) {
    if (t >= 0)
      hits.push_back(static_cast<double>(t));
    else
      ++est.censored;
  }
  est.successes = static_cast<int>(hits.size());
  const SampleStats st = summarize(hits);
  est.mean = st.mean;
  est.std_error = st.std_error;
  est.ci_low = st.mean - 1.96 * st.std_error;
  est.ci_high = st.mean + 1.96 * st.std_error;
  return est;
}

OccupancyEstimate estimate_post_hit_occupancy(const Game& game, int target, int trials, std::uint64_t window,
                                              std::uint64_t cap, std::uint64_t seed) {
  if (target < 0 || target > game.players()) throw InvalidConfig("target", "must lie in [0, n]");
  if (trials < 1) throw InvalidConfig("trials", "must be >= 1");
  if (window < 1) throw InvalidConfig("window", "must be >= 1");
  std::vector<double> occ(static_cast<std::size_t>(trials), -1.0);
  parallel_trials(trials, [&](int k) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
    DynamicsState s = make_state(game);
    if (!run_until_hit(game, s, rng, target, cap)) return;
    std::uint64_t above = 0;
    for (std::uint64_t t = 0; t < window; ++t) {
      step(game, s, rng);
      if (s.ell >= target - kLevelSlack) ++above;
    }
    occ[static_cast<std::size_t>(k)] = static_cast<double>(above) / static_cast<double>(window);
  });
  OccupancyEstimate est;
  est.target = target;
  est.trials = trials;
  est.window = window;
  std::vector<double> hit;
  std::copy_if(occ.begin(), occ.end(), std::back_inserter(hit), [](double x) { return x >= 0; });
  est.hits = static_cast<int>(hit.size());
  const SampleStats st = summarize(hit);
  est.mean_occupancy = st.mean;
  est.std_error = st.std_error;
  return est;
}

EmpiricalDistribution empirical_distribution(const Game& game, std::uint64_t steps, std::uint64_t burn_in,
                                             std::uint64_t seed) {
  if (steps < 1) throw InvalidConfig("steps", "must be >= 1");
  EmpiricalDistribution d;
  d.analytic = stationary(game).probs();
  const int n = game.players();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  Rng rng(seed);
  DynamicsState s = make_state(game);
  for (std::uint64_t t = 0; t < burn_in; ++t) step(game, s, rng);
  for (std::uint64_t t = 0; t < steps; ++t) {
    step(game, s, rng);
    ++counts[static_cast<std::size_t>(std::lround(s.ell))];
  }
  d.samples = steps;
  d.frequency.resize(counts.size());
  double tv = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    d.frequency[k] = static_cast<double>(counts[k]) / static_cast<double>(steps);
    tv += std::abs(d.frequency[k] - d.analytic[k]);
  }
  d.total_variation = 0.5 * tv;
  return d;
}

}  // namespace airdrop
