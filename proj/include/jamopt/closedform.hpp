#pragma once

#include "jamopt/model.hpp"

namespace jamopt {

/// Long-run performance of the threshold policy "attack iff age >= n".
struct PolicyEval {
  long n = 0;
  double avg_age = 0.0;
  double avg_active = 0.0;
  double reward = 0.0;  // avg_age - lambda * avg_active
};

/// Stationary probability of age i under threshold n.
double stationary_pmf(const ChainParams& chain, long n, long i);

/// Time-average age under threshold n.
double average_age(const ChainParams& chain, long n);

/// Fraction of slots attacked under threshold n (1 for n = 0).
double average_active(const ChainParams& chain, long n);

PolicyEval average_reward(const ChainParams& chain, long n, double lambda);

/// Average age as n -> infinity (never attack): a / ((1-b)(1-b+a)).
double limit_average_age(const ChainParams& chain);

/// average_reward(n) minus its never-attack limit, evaluated without cancellation.
double reward_excess(const ChainParams& chain, long n, double lambda);

/// Energy cost at which thresholds n and n+1 tie. Strictly increasing in n.
double lambda_breakpoint(const ChainParams& chain, long n);

/// Piecewise-linear extension of lambda_breakpoint to real x >= 0.
double lambda_interp(const ChainParams& chain, double x);

}  // namespace jamopt
