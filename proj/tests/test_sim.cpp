#include <doctest.h>

#include <cmath>
#include <set>

#include "jamopt/closedform.hpp"
#include "jamopt/errors.hpp"
#include "jamopt/sim.hpp"

using namespace jamopt;

namespace {

const SystemParams kScenario1 = validate_params(0.5, 0.5, 0.25, 1.0);
const SystemParams kScenario2 = validate_params(0.1, 0.5, 0.5, 1.0);

double combined(double x, double y) { return std::sqrt(x * x + y * y); }

}  // namespace

TEST_CASE("random streams are reproducible and distinct") {
  RandomStream a(42, 0);
  RandomStream b(42, 0);
  RandomStream c(42, 1);
  RandomStream d(43, 0);
  bool differs_stream = false;
  bool differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs_stream = differs_stream || x != c.uniform();
    differs_seed = differs_seed || x != d.uniform();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);

  RandomStream e(7, 3);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += e.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(hits / 100000.0 - 0.3) < 3 * std::sqrt(0.3 * 0.7 / 100000.0) + 1e-12);
  CHECK_FALSE(e.bernoulli(0.0));
  CHECK(e.bernoulli(1.0));
}

TEST_CASE("policies choose actions from the current age") {
  RandomStream rng(1, 0);
  CHECK(choose_action(ThresholdPolicy{2}, 1, rng) == Action::Passive);
  CHECK(choose_action(ThresholdPolicy{2}, 2, rng) == Action::Active);
  CHECK(choose_action(ThresholdPolicy{0}, 0, rng) == Action::Active);
  CHECK(choose_action(OppositeThresholdPolicy{2}, 1, rng) == Action::Active);
  CHECK(choose_action(OppositeThresholdPolicy{2}, 2, rng) == Action::Passive);
  CHECK(choose_action(OppositeThresholdPolicy{0}, 0, rng) == Action::Passive);
  CHECK(choose_action(UniformRandomPolicy{0.0}, 5, rng) == Action::Passive);
  CHECK(choose_action(UniformRandomPolicy{1.0}, 5, rng) == Action::Active);
  CHECK(describe(ThresholdPolicy{3}) == "threshold(3)");
  CHECK(describe(OppositeThresholdPolicy{4}) == "opposite(4)");
  CHECK(describe(UniformRandomPolicy{0.5}) == "random(0.5)");
}

TEST_CASE("aggregate simulation examples") {
  const TrajectoryStats t1 =
      simulate_aggregate(kScenario1, Metric::AoI, ThresholdPolicy{1}, 1'000'000, 10'000, 42);
  CHECK(std::abs(t1.mean_state - 8.0 / 3.0) < 3 * t1.se_state);
  CHECK(std::abs(t1.mean_active - 2.0 / 3.0) < 3 * t1.se_active);
  CHECK(t1.mean_reward == t1.mean_state - 1.0 * t1.mean_active);
  CHECK(t1.slots == 1'000'000);
  CHECK(t1.burn_in == 10'000);
  CHECK(t1.seed == 42);
  CHECK(t1.se_state > 0.0);

  const TrajectoryStats never =
      simulate_aggregate(kScenario1, Metric::AoI, UniformRandomPolicy{0.0}, 1'000'000, 10'000, 42);
  CHECK(std::abs(never.mean_state - 1.0) < 3 * never.se_state);
  CHECK(never.mean_active == 0.0);

  const TrajectoryStats opposite = simulate_aggregate(kScenario2, Metric::AoII,
                                                      OppositeThresholdPolicy{0}, 50'000, 0, 9);
  CHECK(opposite.mean_active == 0.0);
  CHECK(opposite.se_active == 0.0);
}

TEST_CASE("simulations are deterministic given the seed") {
  for (SimEngine engine : {SimEngine::Aggregate, SimEngine::Full}) {
    const TrajectoryStats a =
        simulate(engine, kScenario1, Metric::AoII, UniformRandomPolicy{0.5}, 200'000, 1000, 5, 2);
    const TrajectoryStats b =
        simulate(engine, kScenario1, Metric::AoII, UniformRandomPolicy{0.5}, 200'000, 1000, 5, 2);
    CHECK(a.mean_state == b.mean_state);
    CHECK(a.mean_active == b.mean_active);
    CHECK(a.se_reward == b.se_reward);
    CHECK(a.stream == 2);
    const TrajectoryStats c =
        simulate(engine, kScenario1, Metric::AoII, UniformRandomPolicy{0.5}, 200'000, 1000, 6, 2);
    CHECK(a.mean_state != c.mean_state);
  }
}

TEST_CASE("full-system simulation matches the closed form and the aggregate chain") {
  const TrajectoryStats aoii =
      simulate_full(kScenario1, Metric::AoII, ThresholdPolicy{1}, 1'000'000, 10'000, 42);
  CHECK(std::abs(aoii.mean_state - 32.0 / 63.0) < 3 * aoii.se_state);
  CHECK(std::abs(aoii.mean_active - 2.0 / 9.0) < 3 * aoii.se_active);

  const AttackPolicy policies[] = {ThresholdPolicy{1}, ThresholdPolicy{3}, UniformRandomPolicy{0.5},
                                   OppositeThresholdPolicy{2}};
  for (const SystemParams& params : {kScenario1, kScenario2}) {
    for (Metric metric : {Metric::AoI, Metric::AoII}) {
      for (const AttackPolicy& policy : policies) {
        const TrajectoryStats full = simulate_full(params, metric, policy, 1'000'000, 10'000, 11);
        const TrajectoryStats agg = simulate_aggregate(params, metric, policy, 1'000'000, 10'000, 12);
        CAPTURE(describe(policy));
        CAPTURE(params.p);
        CHECK(std::abs(full.mean_state - agg.mean_state) < 3 * combined(full.se_state, agg.se_state));
      }
    }
  }
}

TEST_CASE("full system keeps AoII age zero exactly when the estimate is right") {
  FullSystem system(kScenario1, Metric::AoII);
  RandomStream rng(3, 0);
  for (int t = 0; t < 20000; ++t) {
    system.flip_source(rng);
    system.transmit(t % 3 == 0 ? Action::Active : Action::Passive, rng);
    const FullSystemState& s = system.state();
    REQUIRE((s.age == 0) == (s.source_bit == s.estimate_bit));
  }
  FullSystem aoi(kScenario1, Metric::AoI);
  for (int t = 0; t < 1000; ++t) {
    const long before = aoi.state().age;
    aoi.flip_source(rng);
    CHECK(aoi.state().source_bit == 0);
    const bool delivered = aoi.transmit(Action::Passive, rng);
    CHECK(aoi.state().age == (delivered ? 0 : before + 1));
  }
}

TEST_CASE("empirical kernel reproduces the six increment probabilities") {
  for (const SystemParams& params : {kScenario1, kScenario2}) {
    for (Metric metric : {Metric::AoI, Metric::AoII}) {
      const EmpiricalKernel table = empirical_kernel(params, metric, 1'000'000, 77);
      for (bool at_zero : {true, false}) {
        for (Action action : {Action::Passive, Action::Active}) {
          const KernelCell& cell = table.at(at_zero, action);
          CHECK(cell.visits >= 1000);
          CHECK(std::abs(cell.frequency - increment_prob(params, metric, at_zero, action)) <
                3 * cell.std_error);
        }
      }
    }
  }
  const EmpiricalKernel s1 = empirical_kernel(kScenario1, Metric::AoII, 1'000'000, 1);
  CHECK(std::abs(s1.at(false, Action::Active).frequency - 0.5625) < 3 * s1.at(false, Action::Active).std_error);
  CHECK(std::abs(s1.at(true, Action::Passive).frequency - 0.125) < 3 * s1.at(true, Action::Passive).std_error);
}

TEST_CASE("simulation argument errors") {
  CHECK_THROWS_AS(simulate_aggregate(kScenario1, Metric::AoI, ThresholdPolicy{1}, 100, 100, 1),
                  DomainError);
  CHECK_THROWS_AS(simulate_full(kScenario1, Metric::AoI, ThresholdPolicy{-1}, 100, 0, 1),
                  DomainError);
  CHECK_THROWS_AS(simulate_aggregate(kScenario1, Metric::AoI, UniformRandomPolicy{1.5}, 100, 0, 1),
                  DomainError);
  CHECK_THROWS_AS(empirical_kernel(kScenario1, Metric::AoI, 99'999, 1), DomainError);
  // p = 0.9 AoI rarely leaves state 0 idle for long; AoII at r = 0.1 rarely
  // leaves 0 at all, so the positive cells starve on a short run.
  CHECK_THROWS_AS(empirical_kernel(validate_params(0.9, 0.9, 0.01, 1.0), Metric::AoII, 100'000, 1),
                  InsufficientSamples);
}

TEST_CASE("engine names") {
  CHECK(parse_sim_engine("aggregate") == SimEngine::Aggregate);
  CHECK(parse_sim_engine("full") == SimEngine::Full);
  CHECK(to_string(SimEngine::Full) == "full");
  CHECK_FALSE(parse_sim_engine("gpu").has_value());
}

TEST_CASE("short horizons fall back to fewer batches") {
  const TrajectoryStats tiny =
      simulate_aggregate(kScenario1, Metric::AoI, ThresholdPolicy{1}, 51, 50, 1);
  CHECK(tiny.se_state == 0.0);
  const TrajectoryStats small =
      simulate_aggregate(kScenario1, Metric::AoI, ThresholdPolicy{1}, 60, 10, 1);
  CHECK(std::isfinite(small.se_state));
}
