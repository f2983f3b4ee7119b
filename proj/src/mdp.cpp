#include "jamopt/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jamopt/errors.hpp"

namespace jamopt {

std::string to_string(StructureViolation::Property property) {
  switch (property) {
    case StructureViolation::Property::MonotoneValues:
      return "monotone-values";
    case StructureViolation::Property::MonotoneGap:
      return "monotone-gap";
    case StructureViolation::Property::SingleStep:
      return "single-step";
  }
  return "?";
}

namespace {

// Bellman update of a single state; shared by both sweep variants so they
// stay bit-identical.
inline void bellman_state(const IncrementKernel& kernel, double lambda,
                          std::span<const double> values, std::span<double> next,
                          std::span<double> gaps, std::size_t s) {
  const std::size_t last = values.size() - 1;
  const double v_up = values[std::min(s + 1, last)];
  const double v_zero = values[0];
  const bool at_zero = s == 0;
  const double up0 = kernel.at(at_zero, Action::Passive);
  const double up1 = kernel.at(at_zero, Action::Active);
  const double age = static_cast<double>(s);
  const double passive = age + up0 * v_up + (1.0 - up0) * v_zero;
  const double active = age - lambda + up1 * v_up + (1.0 - up1) * v_zero;
  next[s] = std::max(passive, active);
  gaps[s] = active - passive;
}

void check_sizes(std::span<const double> values, std::span<double> next, std::span<double> gaps) {
  if (values.empty() || next.size() != values.size() || gaps.size() != values.size()) {
    throw std::invalid_argument("bellman_sweep: mismatched or empty buffers");
  }
}

struct ChangeNorms {
  double sup = 0.0;
  double span = 0.0;
};

// Subtracts next[0] from every entry of `next`, then reports the sup-norm
// and span of next - values. min/max reductions are order-independent.
ChangeNorms normalize(Execution execution, std::span<const double> values, std::span<double> next) {
  const double offset = next[0];
  const long count = static_cast<long>(values.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sup = 0.0;
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi, sup)
    for (long s = 0; s < count; ++s) {
      next[s] -= offset;
      const double d = next[s] - values[s];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sup = std::max(sup, std::abs(d));
    }
  } else {
    for (long s = 0; s < count; ++s) {
      next[s] -= offset;
      const double d = next[s] - values[s];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sup = std::max(sup, std::abs(d));
    }
  }
  return ChangeNorms{sup, hi - lo};
}

}  // namespace

void bellman_sweep_serial(const IncrementKernel& kernel, double lambda,
                          std::span<const double> values, std::span<double> next,
                          std::span<double> gaps) {
  check_sizes(values, next, gaps);
  for (std::size_t s = 0; s < values.size(); ++s) {
    bellman_state(kernel, lambda, values, next, gaps, s);
  }
}

void bellman_sweep_parallel(const IncrementKernel& kernel, double lambda,
                            std::span<const double> values, std::span<double> next,
                            std::span<double> gaps) {
  check_sizes(values, next, gaps);
  const long count = static_cast<long>(values.size());
#pragma omp parallel for schedule(static)
  for (long s = 0; s < count; ++s) {
    bellman_state(kernel, lambda, values, next, gaps, static_cast<std::size_t>(s));
  }
}

void bellman_sweep(Execution execution, const IncrementKernel& kernel, double lambda,
                   std::span<const double> values, std::span<double> next,
                   std::span<double> gaps) {
  if (execution == Execution::Parallel) {
    bellman_sweep_parallel(kernel, lambda, values, next, gaps);
  } else {
    bellman_sweep_serial(kernel, lambda, values, next, gaps);
  }
}

double tail_mass_above(const IncrementKernel& kernel, std::span<const Action> actions,
                       double fraction) {
  if (actions.empty()) return 0.0;
  const std::size_t last = actions.size() - 1;
  // Unnormalized weights: w(s+1) = P(up | s) w(s); the cap keeps its own
  // increment as a self-loop.
  std::vector<double> weight(actions.size(), 0.0);
  weight[0] = 1.0;
  for (std::size_t s = 0; s + 1 < last; ++s) {
    weight[s + 1] = kernel.at(s == 0, actions[s]) * weight[s];
  }
  if (last > 0) {
    const double up_prev = kernel.at(last - 1 == 0, actions[last - 1]);
    const double stay = kernel.at(last == 0, actions[last]);
    weight[last] = up_prev * weight[last - 1] / (1.0 - stay);
  }
  double total = 0.0;
  double tail = 0.0;
  const double cut = fraction * static_cast<double>(last);
  for (std::size_t s = 0; s <= last; ++s) {
    total += weight[s];
    if (static_cast<double>(s) > cut) tail += weight[s];
  }
  return tail / total;
}

RviSolution rvi_solve(const SystemParams& params, Metric metric, const RviOptions& options) {
  if (options.state_cap < 100) throw DomainError("state_cap", "must be >= 100");
  if (!(options.tol > 0.0)) throw DomainError("tol", "must be > 0");
  if (options.max_iters == 0) throw DomainError("max_iters", "must be >= 1");

  const IncrementKernel kernel = make_kernel(params, metric);
  const std::size_t count = static_cast<std::size_t>(options.state_cap) + 1;
  std::vector<double> values(count, 0.0);
  std::vector<double> next(count, 0.0);
  std::vector<double> gaps(count, 0.0);

  RviSolution solution;
  solution.lambda = params.lambda;
  bool converged = false;
  ChangeNorms norms;
  std::size_t iter = 0;
  while (iter < options.max_iters) {
    ++iter;
    bellman_sweep(options.execution, kernel, params.lambda, values, next, gaps);
    solution.gain = next[0];
    norms = normalize(options.execution, values, next);
    values.swap(next);
    if (norms.sup < options.tol && norms.span < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "relative value iteration did not converge in " << options.max_iters
        << " sweeps (residual " << norms.sup << ", span " << norms.span << ")";
    throw NoConvergence(msg.str(), options.max_iters, norms.sup);
  }

  // Action-value gaps at the converged values.
  bellman_sweep(options.execution, kernel, params.lambda, values, next, gaps);

  solution.iterations = iter;
  solution.residual = norms.sup;
  solution.span = norms.span;
  solution.actions.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    solution.actions[s] = gaps[s] > 0.0 ? Action::Active : Action::Passive;
  }
  solution.values = std::move(values);
  solution.gaps = std::move(gaps);
  solution.threshold = certify_structure(solution);
  solution.tail_mass = tail_mass_above(kernel, solution.actions, 0.9);
  if (solution.tail_mass > options.cap_mass_limit) {
    std::ostringstream msg;
    msg << "stationary mass " << solution.tail_mass << " above 0.9 * cap exceeds "
        << options.cap_mass_limit << "; raise state_cap";
    throw CapSuspicious(msg.str(), solution.tail_mass);
  }
  return solution;
}

std::variant<long, StructureViolation> certify_structure(const RviSolution& solution,
                                                         double tolerance) {
  using Property = StructureViolation::Property;
  const auto& values = solution.values;
  const auto& gaps = solution.gaps;
  const auto& actions = solution.actions;
  const auto slack = [tolerance](double reference) {
    return tolerance * std::max(1.0, std::abs(reference));
  };

  for (std::size_t s = 0; s + 1 < values.size(); ++s) {
    if (values[s + 1] < values[s] - slack(values[s])) {
      std::ostringstream msg;
      msg << "V(" << s + 1 << ") = " << values[s + 1] << " < V(" << s << ") = " << values[s];
      return StructureViolation{Property::MonotoneValues, static_cast<long>(s + 1), msg.str()};
    }
  }
  for (std::size_t s = 0; s + 1 < gaps.size(); ++s) {
    if (gaps[s + 1] < gaps[s] - slack(gaps[s])) {
      std::ostringstream msg;
      msg << "gap(" << s + 1 << ") = " << gaps[s + 1] << " < gap(" << s << ") = " << gaps[s];
      return StructureViolation{Property::MonotoneGap, static_cast<long>(s + 1), msg.str()};
    }
  }
  const auto first_active = std::find(actions.begin(), actions.end(), Action::Active);
  const auto stray_passive = std::find(first_active, actions.end(), Action::Passive);
  if (stray_passive != actions.end()) {
    const long state = static_cast<long>(stray_passive - actions.begin());
    std::ostringstream msg;
    msg << "passive action at state " << state << " after active action at state "
        << (first_active - actions.begin());
    return StructureViolation{Property::SingleStep, state, msg.str()};
  }
  return static_cast<long>(first_active - actions.begin());
}

}  // namespace jamopt
