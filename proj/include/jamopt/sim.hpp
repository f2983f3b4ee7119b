#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "jamopt/model.hpp"

namespace jamopt {

/// Attack iff age >= n.
struct ThresholdPolicy {
  long n = 0;
};
/// Attack with probability rho every slot, independent of the age.
struct UniformRandomPolicy {
  double rho = 0.5;
};
/// Attack iff age < n; the mirror image of ThresholdPolicy.
struct OppositeThresholdPolicy {
  long n = 0;
};

using AttackPolicy = std::variant<ThresholdPolicy, UniformRandomPolicy, OppositeThresholdPolicy>;

std::string describe(const AttackPolicy& policy);

/// Seedable generator; distinct stream ids give statistically independent
/// sequences for the same seed. Uniform draws use the top 53 bits so
/// results do not depend on the standard library's distributions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double probability) { return uniform() < probability; }

 private:
  std::mt19937_64 engine_;
};

Action choose_action(const AttackPolicy& policy, long age, RandomStream& rng);

struct TrajectoryStats {
  std::uint64_t slots = 0;
  std::uint64_t burn_in = 0;
  double lambda = 0.0;
  double mean_state = 0.0;
  double mean_active = 0.0;
  double mean_reward = 0.0;  // mean_state - lambda * mean_active
  double se_state = 0.0;
  double se_active = 0.0;
  double se_reward = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

inline constexpr int kBatchCount = 100;

/// Binary source, monitor estimate and the resulting age.
struct FullSystemState {
  int source_bit = 0;
  int estimate_bit = 0;
  long age = 0;
};

/// Physical model of one slot: source flip, attack decision, channel and
/// jamming draws, estimate update and age update, in that order.
class FullSystem {
 public:
  FullSystem(const SystemParams& params, Metric metric) : params_(params), metric_(metric) {}

  const FullSystemState& state() const noexcept { return state_; }

  /// Step 1: the source flips with probability r (AoII only).
  void flip_source(RandomStream& rng);

  /// Steps 3-5 under the chosen action. Returns true if the update was delivered.
  bool transmit(Action action, RandomStream& rng);

 private:
  SystemParams params_;
  Metric metric_;
  FullSystemState state_;
};

/// Simulates the age as a 1-D chain using the per-slot increment
/// probabilities. The action governing slot t -> t+1 is read from s(t);
/// statistics cover slots [burn_in, slots).
TrajectoryStats simulate_aggregate(const SystemParams& params, Metric metric,
                                   const AttackPolicy& policy, std::uint64_t slots,
                                   std::uint64_t burn_in, std::uint64_t seed,
                                   std::uint64_t stream = 0);

/// Same statistics from the full source/channel/attacker model.
TrajectoryStats simulate_full(const SystemParams& params, Metric metric,
                              const AttackPolicy& policy, std::uint64_t slots,
                              std::uint64_t burn_in, std::uint64_t seed,
                              std::uint64_t stream = 0);

enum class SimEngine { Aggregate, Full };

std::string_view to_string(SimEngine engine);
std::optional<SimEngine> parse_sim_engine(std::string_view text);

TrajectoryStats simulate(SimEngine engine, const SystemParams& params, Metric metric,
                         const AttackPolicy& policy, std::uint64_t slots, std::uint64_t burn_in,
                         std::uint64_t seed, std::uint64_t stream = 0);

struct KernelCell {
  std::uint64_t visits = 0;
  std::uint64_t increments = 0;
  double frequency = 0.0;
  double std_error = 0.0;  // binomial: sqrt(f (1 - f) / visits)
};

/// Empirical increment frequencies indexed [at_zero ? 0 : 1][active ? 1 : 0].
struct EmpiricalKernel {
  std::array<std::array<KernelCell, 2>, 2> cells{};

  const KernelCell& at(bool at_zero, Action action) const {
    return cells[at_zero ? 0 : 1][action == Action::Active ? 1 : 0];
  }
};

/// Runs the full model under a fair-coin attack policy and tabulates how
/// often the age incremented, per (age == 0, action) cell. Requires at
/// least 1e5 slots; throws InsufficientSamples if a cell has < 1000 visits.
EmpiricalKernel empirical_kernel(const SystemParams& params, Metric metric, std::uint64_t slots,
                                 std::uint64_t seed);

}  // namespace jamopt
