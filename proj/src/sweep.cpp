#include "jamopt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "jamopt/closedform.hpp"
#include "jamopt/csv.hpp"
#include "jamopt/errors.hpp"
#include "jamopt/search.hpp"

namespace jamopt {

namespace {

std::vector<SweepPolicy> sorted_policies(const SweepSpec& spec) {
  std::vector<SweepPolicy> policies = spec.policies;
  std::sort(policies.begin(), policies.end());
  policies.erase(std::unique(policies.begin(), policies.end()), policies.end());
  return policies;
}

SweepRow evaluate(const SweepSpec& spec, const SimSettings& sim, double lambda, SweepPolicy policy,
                  std::uint64_t stream) {
  const SystemParams params = validate_params(spec.p, spec.q, spec.r, lambda);
  const ChainParams chain = to_chain(params, spec.metric);
  const long n_star = find_threshold_breakpoints(chain, lambda);

  SweepRow row;
  row.metric = spec.metric;
  row.p = spec.p;
  row.q = spec.q;
  row.r = spec.r;
  row.lambda = lambda;
  row.policy = policy;
  if (policy == SweepPolicy::Optimal) {
    const PolicyEval eval = average_reward(chain, n_star, lambda);
    row.n_star = n_star;
    row.avg_age = eval.avg_age;
    row.avg_active = eval.avg_active;
    row.avg_reward = eval.reward;
    return row;
  }
  AttackPolicy attack = UniformRandomPolicy{sim.random_rho};
  if (policy == SweepPolicy::Opposite) {
    attack = OppositeThresholdPolicy{n_star};
    row.n_star = n_star;
  }
  const TrajectoryStats stats =
      simulate(sim.engine, params, spec.metric, attack, sim.slots, sim.burn_in, sim.seed, stream);
  row.avg_age = stats.mean_state;
  row.avg_active = stats.mean_active;
  row.avg_reward = stats.mean_reward;
  row.se_reward = stats.se_reward;
  row.seed = sim.seed;
  row.slots = sim.slots;
  return row;
}

}  // namespace

std::string_view to_string(SweepPolicy policy) {
  switch (policy) {
    case SweepPolicy::Optimal:
      return "optimal";
    case SweepPolicy::Opposite:
      return "opposite";
    case SweepPolicy::Random:
      return "random";
  }
  return "?";
}

std::optional<SweepPolicy> parse_sweep_policy(std::string_view text) {
  if (text == "optimal") return SweepPolicy::Optimal;
  if (text == "opposite") return SweepPolicy::Opposite;
  if (text == "random") return SweepPolicy::Random;
  return std::nullopt;
}

void validate_sweep(const SweepSpec& spec) {
  validate_params(spec.p, spec.q, spec.r, 1.0);
  if (!(spec.lambda_start > 0.0) || !std::isfinite(spec.lambda_start)) {
    throw DomainError("lambda-start", "must be finite and > 0");
  }
  if (!(spec.lambda_end >= spec.lambda_start) || !std::isfinite(spec.lambda_end)) {
    throw DomainError("lambda-end", "must be finite and >= lambda-start");
  }
  if (!(spec.lambda_step > 0.0) || !std::isfinite(spec.lambda_step)) {
    throw DomainError("lambda-step", "must be finite and > 0");
  }
  if (spec.policies.empty()) throw DomainError("policy", "at least one policy is required");
}

std::vector<double> lambda_grid(const SweepSpec& spec) {
  validate_sweep(spec);
  const double span = (spec.lambda_end - spec.lambda_start) / spec.lambda_step;
  const auto count = static_cast<std::size_t>(std::floor(span * (1.0 + 1e-9) + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = spec.lambda_start + static_cast<double>(k) * spec.lambda_step;
  }
  return grid;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SimSettings& sim,
                                Execution execution) {
  const std::vector<double> grid = lambda_grid(spec);
  const std::vector<SweepPolicy> policies = sorted_policies(spec);
  const std::size_t per_lambda = policies.size();
  const long tasks = static_cast<long>(grid.size() * per_lambda);
  std::vector<SweepRow> rows(static_cast<std::size_t>(tasks));

  auto run_task = [&](long task) {
    const auto index = static_cast<std::size_t>(task) / per_lambda;
    const SweepPolicy policy = policies[static_cast<std::size_t>(task) % per_lambda];
    const std::uint64_t stream = index * 3 + static_cast<std::uint64_t>(policy);
    rows[static_cast<std::size_t>(task)] = evaluate(spec, sim, grid[index], policy, stream);
  };

  if (execution == Execution::Serial) {
    for (long task = 0; task < tasks; ++task) run_task(task);
    return rows;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (long task = 0; task < tasks; ++task) {
    try {
      run_task(task);
    } catch (...) {
#pragma omp critical(jamopt_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& row : rows) {
    out << to_string(row.metric) << ',' << format_real(row.p) << ',' << format_real(row.q) << ','
        << format_real(row.r) << ',' << format_real(row.lambda) << ',' << to_string(row.policy)
        << ',';
    if (row.n_star) out << *row.n_star;
    out << ',' << format_real(row.avg_age) << ',' << format_real(row.avg_active) << ','
        << format_real(row.avg_reward) << ',';
    if (row.se_reward) out << format_real(*row.se_reward);
    out << ',';
    if (row.seed) out << *row.seed;
    out << ',';
    if (row.slots) out << *row.slots;
    out << '\n';
  }
}

}  // namespace jamopt
