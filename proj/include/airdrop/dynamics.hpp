#ifndef AIRDROP_DYNAMICS_HPP
#define AIRDROP_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "airdrop/model.hpp"
#include "airdrop/rng.hpp"

namespace airdrop {

// Logit response of player i: P(x) proportional to exp(beta * u_i(x, a_-i)),
// aligned with the player's action set.
std::vector<double> logit_response(const Game& game, const Profile& profile, int i);

struct DynamicsState {
  Profile profile;
  std::uint64_t step = 0;
  double ell = 0.0;    // sum of contributions
  double value = 0.0;  // V(profile)
};

// Starts from the all-zero profile unless `initial` is given.
DynamicsState make_state(const Game& game, const std::optional<Profile>& initial = std::nullopt);

// One revision: a uniformly random player resamples from its logit response.
void step(const Game& game, DynamicsState& state, Rng& rng);

struct TrajectoryPoint {
  std::uint64_t step = 0;
  double ell = 0.0;
  double value = 0.0;
  double potential = 0.0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::uint64_t stride = 1;
  std::vector<TrajectoryPoint> points;
};

// Records step 0, every `stride`-th step, and the final step.
TrajectoryRecord run_trajectory(const Game& game, std::uint64_t steps, std::uint64_t seed,
                                std::uint64_t stride = 1,
                                const std::optional<Profile>& initial = std::nullopt);

struct HittingEstimate {
  int target = 0;
  int trials = 0;
  int successes = 0;
  int censored = 0;
  std::uint64_t cap = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<std::int64_t> per_trial;  // hitting step, or -1 when censored
};

inline constexpr std::uint64_t kDefaultHittingCap = 10'000'000;

// Independent trials from the all-zero profile; a trial hits at the first
// step with sum_i a_i >= target. Trial k uses stream (seed, k).
HittingEstimate estimate_hitting_time(const Game& game, int target, int trials,
                                      std::uint64_t cap = kDefaultHittingCap, std::uint64_t seed = 0);

struct OccupancyEstimate {
  int target = 0;
  int trials = 0;
  int hits = 0;
  std::uint64_t window = 0;
  double mean_occupancy = 0.0;  // fraction of post-hit steps with l >= target
  double std_error = 0.0;
};

// After the first hit of `target`, run `window` more steps and record how
// often the level stays at or above it.
OccupancyEstimate estimate_post_hit_occupancy(const Game& game, int target, int trials, std::uint64_t window,
                                              std::uint64_t cap = kDefaultHittingCap, std::uint64_t seed = 0);

struct EmpiricalDistribution {
  std::vector<double> frequency;  // over l in [0, n]
  std::vector<double> analytic;   // lumped stationary law
  double total_variation = 0.0;
  std::uint64_t samples = 0;
};

// Anonymous technology, binary actions and uniform costs.
EmpiricalDistribution empirical_distribution(const Game& game, std::uint64_t steps, std::uint64_t burn_in,
                                             std::uint64_t seed);

// Worker count for parallel trials; AIRDROP_LAB_THREADS caps it.
unsigned worker_count();

}  // namespace airdrop

#endif  // AIRDROP_DYNAMICS_HPP
