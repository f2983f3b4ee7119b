#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "jamopt/execution.hpp"
#include "jamopt/model.hpp"
#include "jamopt/sim.hpp"

namespace jamopt {

// Declaration order is the row order within one lambda.
enum class SweepPolicy { Optimal, Opposite, Random };

std::string_view to_string(SweepPolicy policy);
std::optional<SweepPolicy> parse_sweep_policy(std::string_view text);

struct SweepSpec {
  Metric metric = Metric::AoI;
  double p = 0.5;
  double q = 0.5;
  double r = 0.25;
  double lambda_start = 1.0;
  double lambda_end = 10.0;
  double lambda_step = 0.1;
  std::vector<SweepPolicy> policies{SweepPolicy::Optimal, SweepPolicy::Opposite,
                                    SweepPolicy::Random};
};

struct SimSettings {
  std::uint64_t slots = 1'000'000;
  std::uint64_t burn_in = 10'000;
  std::uint64_t seed = 42;
  double random_rho = 0.5;
  SimEngine engine = SimEngine::Aggregate;
};

/// One CSV row. Optimal rows are closed-form and leave the simulation
/// columns empty; random rows have no threshold.
struct SweepRow {
  Metric metric = Metric::AoI;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double lambda = 0.0;
  SweepPolicy policy = SweepPolicy::Optimal;
  std::optional<long> n_star;
  double avg_age = 0.0;
  double avg_active = 0.0;
  double avg_reward = 0.0;
  std::optional<double> se_reward;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> slots;
};

/// Throws DomainError on an empty/reversed grid, a nonpositive step, or
/// link parameters outside their ranges.
void validate_sweep(const SweepSpec& spec);

/// start + k * step for k = 0..K, with K = floor((end - start) / step)
/// up to a 1e-9 relative allowance so that the nominal end point is kept.
std::vector<double> lambda_grid(const SweepSpec& spec);

/// Evaluates every (lambda, policy) pair. Each pair draws from its own
/// stream (lambda index * 3 + policy), so the serial and parallel paths
/// return identical rows sorted by (lambda, policy).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SimSettings& sim,
                                Execution execution = Execution::Parallel);

inline constexpr std::string_view kSweepHeader =
    "metric,p,q,r,lambda,policy,n_star,avg_age,avg_active,avg_reward,se_reward,seed,slots";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace jamopt
