#pragma once

// Closed-form stationary quantities of the birth/reset chain, generic over the
// scalar type so the same expressions can be evaluated in extended precision.

#include <cmath>
#include <type_traits>

namespace jamopt::detail {

using std::pow;

/// b^(n-1), with b^-1 for the always-active policy n = 0. Values below
/// 1e-300 are flushed to zero for double, which pins every result to its
/// n -> infinity limit instead of producing denormal noise.
template <class Real>
Real threshold_power(const Real& b, long n) {
  Real x = n == 0 ? Real(1) / b : Real(pow(b, Real(n - 1)));
  if constexpr (std::is_floating_point_v<Real>) {
    if (x < Real(1e-300)) x = Real(0);
  }
  return x;
}

/// Common normalizer (1-b+a)(1-c) + a(c-b) b^(n-1).
template <class Real>
Real normalizer(const Real& a, const Real& b, const Real& c, const Real& x) {
  return (1 - b + a) * (1 - c) + a * (c - b) * x;
}

template <class Real>
Real stationary_pmf(const Real& a, const Real& b, const Real& c, long n, long i) {
  const Real x = threshold_power(b, n);
  const Real u0 = (1 - b) * (1 - c) / normalizer(a, b, c, x);
  if (i == 0) return u0;
  if (i <= n) return a * Real(pow(b, Real(i - 1))) * u0;
  return a * x * Real(pow(c, Real(i - n))) * u0;
}

/// Average age under the never-attack policy.
template <class Real>
Real limit_average_age(const Real& a, const Real& b) {
  return a / ((1 - b) * (1 - b + a));
}

template <class Real>
Real excess_rate(const Real& a, const Real& b, const Real& c, long n) {
  return (c - b) * (Real(n) * (1 - c) * (1 - b + a) + 1 + c * (a - b)) / ((1 - c) * (1 - b + a));
}

/// Extra average age caused by threshold n. Rearranged from the moment sum
/// into a multiple of b^(n-1), so it is accurate to a few ulp of itself.
template <class Real>
Real age_excess(const Real& a, const Real& b, const Real& c, long n) {
  const Real x = threshold_power(b, n);
  const Real rate = excess_rate(a, b, c, n);
  return a * x * rate / normalizer(a, b, c, x);
}

/// Sum of i u_n(i) over all i, written as its n -> infinity limit plus the
/// excess; the direct form loses several ulp to cancellation once b^n is small.
template <class Real>
Real average_age(const Real& a, const Real& b, const Real& c, long n) {
  return limit_average_age(a, b) + age_excess(a, b, c, n);
}

template <class Real>
Real average_active(const Real& a, const Real& b, const Real& c, long n) {
  if (n == 0) return Real(1);
  const Real x = threshold_power(b, n);
  return a * (1 - b) * x / normalizer(a, b, c, x);
}

/// average_age(n) - lambda average_active(n) minus its n -> infinity limit,
/// factored through b^(n-1) so it keeps full relative precision where the
/// reward itself has flattened below rounding.
template <class Real>
Real reward_excess(const Real& a, const Real& b, const Real& c, long n, const Real& lambda) {
  if (n == 0) return age_excess(a, b, c, 0) - lambda;
  const Real x = threshold_power(b, n);
  const Real rate = excess_rate(a, b, c, n);
  return a * x * (rate - lambda * (1 - b)) / normalizer(a, b, c, x);
}

/// Energy cost at which thresholds n and n+1 earn the same average reward.
template <class Real>
Real lambda_breakpoint(const Real& a, const Real& b, const Real& c, long n) {
  if (n == 0) {
    return a * (c - b) / ((1 - c) * (b * (1 - c) + a * c));
  }
  Real bn = Real(pow(b, Real(n)));
  if constexpr (std::is_floating_point_v<Real>) {
    if (bn < Real(1e-300)) bn = Real(0);
  }
  const Real scale = (c - b) / ((1 - b) * (1 - b) * (1 - b + a) * (1 - c));
  const Real bracket = Real(n) * (1 - c) * (1 - b + a) * (1 - b) - a * bn * (c - b) +
                       a * (c - b) + (1 - b) * (1 - b);
  return scale * bracket;
}

}  // namespace jamopt::detail
