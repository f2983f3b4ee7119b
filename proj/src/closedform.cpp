#include "jamopt/closedform.hpp"

#include <cmath>

#include "jamopt/detail/closedform_generic.hpp"
#include "jamopt/errors.hpp"

namespace jamopt {

namespace {

void require_nonnegative(const char* name, long value) {
  if (value < 0) throw DomainError(name, "must be nonnegative");
}

}  // namespace

double stationary_pmf(const ChainParams& chain, long n, long i) {
  require_nonnegative("n", n);
  require_nonnegative("i", i);
  return detail::stationary_pmf(chain.a, chain.b, chain.c, n, i);
}

double average_age(const ChainParams& chain, long n) {
  require_nonnegative("n", n);
  return detail::average_age(chain.a, chain.b, chain.c, n);
}

double average_active(const ChainParams& chain, long n) {
  require_nonnegative("n", n);
  return detail::average_active(chain.a, chain.b, chain.c, n);
}

PolicyEval average_reward(const ChainParams& chain, long n, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda", "must be > 0");
  PolicyEval eval;
  eval.n = n;
  eval.avg_age = average_age(chain, n);
  eval.avg_active = average_active(chain, n);
  eval.reward = eval.avg_age - lambda * eval.avg_active;
  return eval;
}

double reward_excess(const ChainParams& chain, long n, double lambda) {
  require_nonnegative("n", n);
  if (!(lambda > 0.0)) throw DomainError("lambda", "must be > 0");
  return detail::reward_excess(chain.a, chain.b, chain.c, n, lambda);
}

double limit_average_age(const ChainParams& chain) {
  return detail::limit_average_age(chain.a, chain.b);
}

double lambda_breakpoint(const ChainParams& chain, long n) {
  require_nonnegative("n", n);
  return detail::lambda_breakpoint(chain.a, chain.b, chain.c, n);
}

double lambda_interp(const ChainParams& chain, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("x", "must be finite and >= 0");
  const double floor_x = std::floor(x);
  const long i = static_cast<long>(floor_x);
  if (floor_x == x) return lambda_breakpoint(chain, i);
  const double frac = x - floor_x;
  return lambda_breakpoint(chain, i + 1) * frac - lambda_breakpoint(chain, i) * (frac - 1.0);
}

}  // namespace jamopt
