#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jamopt/execution.hpp"
#include "jamopt/model.hpp"

namespace jamopt {

/// First structural property that failed, and where.
struct StructureViolation {
  enum class Property { MonotoneValues, MonotoneGap, SingleStep };
  Property property = Property::SingleStep;
  long state = 0;
  std::string detail;
};

std::string to_string(StructureViolation::Property property);

/// Result of relative value iteration on ages [0, state_cap].
struct RviSolution {
  std::vector<double> values;   // differential values, values[0] == 0
  std::vector<double> gaps;     // V^1(s) - V^0(s) at the converged values
  std::vector<Action> actions;  // greedy action per state, passive on ties
  double gain = 0.0;
  std::variant<long, StructureViolation> threshold;
  std::size_t iterations = 0;
  double residual = 0.0;  // final sup-norm change of the differential values
  double span = 0.0;      // final span of that change
  double tail_mass = 0.0; // stationary mass above 0.9 * cap under `actions`
  double lambda = 0.0;
};

struct RviOptions {
  long state_cap = 2000;
  double tol = 1e-10;
  std::size_t max_iters = 1'000'000;
  double cap_mass_limit = 1e-8;
  Execution execution = Execution::Serial;
};

/// One application of the average-reward Bellman operator on the truncated
/// chain. For each s, writes max_a { s - lambda a + P(s+1|s,a) V(s+1) +
/// (1 - P(s+1|s,a)) V(0) } to `next` and V^1(s) - V^0(s) to `gaps`. The
/// state at the end of `values` is saturating: its increment stays in place.
void bellman_sweep_serial(const IncrementKernel& kernel, double lambda,
                          std::span<const double> values, std::span<double> next,
                          std::span<double> gaps);

void bellman_sweep_parallel(const IncrementKernel& kernel, double lambda,
                            std::span<const double> values, std::span<double> next,
                            std::span<double> gaps);

void bellman_sweep(Execution execution, const IncrementKernel& kernel, double lambda,
                   std::span<const double> values, std::span<double> next,
                   std::span<double> gaps);

/// Relative value iteration normalized at state 0. Throws NoConvergence if
/// the sup-norm and span of successive changes do not both drop below
/// `options.tol`, and CapSuspicious if the extracted policy leaves more than
/// `options.cap_mass_limit` stationary mass above 0.9 * cap.
RviSolution rvi_solve(const SystemParams& params, Metric metric, const RviOptions& options = {});

/// Checks monotone values, monotone action-value gap and a single
/// passive-to-active step. Returns the step index or the first violation.
std::variant<long, StructureViolation> certify_structure(const RviSolution& solution,
                                                         double tolerance = 1e-9);

/// Stationary mass above `fraction * cap` for the chain driven by `actions`.
double tail_mass_above(const IncrementKernel& kernel, std::span<const Action> actions,
                       double fraction);

}  // namespace jamopt
