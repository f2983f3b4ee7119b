#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace jamopt {

enum class Metric { AoI, AoII };

enum class Action { Passive, Active };

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view text);

/// Validated physical parameters of the status-update link.
///
/// `p` is the per-slot channel success probability, `q` the probability that
/// an attack jams an otherwise successful slot, `r` the source flip
/// probability and `lambda` the energy cost charged per attacked slot.
/// Instances are produced by validate_params().
struct SystemParams {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double lambda = 0.0;

  /// Same link with a different energy cost (re-validated).
  SystemParams with_lambda(double new_lambda) const;
};

using WarningSink = std::function<void(std::string_view)>;

/// Checks 0 < p < 1, 0 < q < 1, 0 < r <= 1/2 and lambda > 0.
///
/// Throws DomainError naming the first offending field. The r = 1/2 boundary
/// is admitted; `warn` is called once for it.
SystemParams validate_params(double p, double q, double r, double lambda,
                             const WarningSink& warn = {});

/// Parameters of the generic birth/reset chain under a threshold policy:
/// increment probability `a` out of state 0 while passive, `b` out of a
/// positive passive state, `c` out of an active state.
struct ChainParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Throws DomainError unless 0 < a <= b < c < 1.
ChainParams validate_chain(double a, double b, double c);

ChainParams to_chain(const SystemParams& params, Metric metric);

/// Probability that the age increments by one (otherwise it resets to 0).
double increment_prob(const SystemParams& params, Metric metric, bool at_zero, Action action);

/// The four per-slot increment probabilities, precomputed for inner loops.
struct IncrementKernel {
  double zero_passive = 0.0;
  double zero_active = 0.0;
  double positive_passive = 0.0;
  double positive_active = 0.0;

  double at(bool at_zero, Action action) const noexcept {
    if (at_zero) {
      return action == Action::Active ? zero_active : zero_passive;
    }
    return action == Action::Active ? positive_active : positive_passive;
  }
  double at(long state, Action action) const noexcept { return at(state == 0, action); }
};

IncrementKernel make_kernel(const SystemParams& params, Metric metric);

}  // namespace jamopt
