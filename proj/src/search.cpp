#include "jamopt/search.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "jamopt/closedform.hpp"
#include "jamopt/errors.hpp"

namespace jamopt {

namespace {

constexpr long kMaxBracket = 1L << 52;
constexpr std::size_t kTraceLimit = 1000;

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda", "must be finite and > 0");
  }
}

}  // namespace

std::string_view to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::Alg1:
      return "alg1";
    case SearchMethod::Breakpoints:
      return "breakpoints";
    case SearchMethod::Scan:
      return "scan";
  }
  return "?";
}

std::optional<SearchMethod> parse_search_method(std::string_view text) {
  if (text == "alg1") return SearchMethod::Alg1;
  if (text == "breakpoints") return SearchMethod::Breakpoints;
  if (text == "scan") return SearchMethod::Scan;
  return std::nullopt;
}

double default_alpha(const ChainParams& chain) {
  const double slope = lambda_breakpoint(chain, 1) - lambda_breakpoint(chain, 0);
  return std::clamp(1.0 / slope, 1e-3, 10.0);
}

long find_threshold_scan(const ChainParams& chain, double lambda, long n_cap) {
  require_positive_lambda(lambda);
  if (n_cap < 1) throw DomainError("n_cap", "must be >= 1");
  // Rewards are compared through their excess over the never-attack limit;
  // the raw rewards of large thresholds agree to the last bit.
  long best_n = 0;
  double best = reward_excess(chain, 0, lambda);
  double previous = best;
  double last = best;
  for (long n = 1; n <= n_cap; ++n) {
    const double reward = reward_excess(chain, n, lambda);
    if (reward > best) {
      best = reward;
      best_n = n;
    }
    previous = last;
    last = reward;
  }
  if (last > previous) {
    std::ostringstream msg;
    msg << "reward still increasing at n_cap = " << n_cap << " for lambda = " << lambda;
    throw CapTooSmall(msg.str());
  }
  return best_n;
}

long find_threshold_breakpoints(const ChainParams& chain, double lambda) {
  require_positive_lambda(lambda);
  if (lambda <= lambda_breakpoint(chain, 0)) return 0;

  // Invariant: lambda(lo) < lambda <= lambda(hi).
  long lo = 0;
  long hi = 1;
  while (!(lambda <= lambda_breakpoint(chain, hi))) {
    lo = hi;
    if (hi >= kMaxBracket) {
      std::ostringstream msg;
      msg << "lambda = " << lambda << " exceeds lambda(n) for all n <= " << hi;
      throw Unbounded(msg.str());
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (lambda <= lambda_breakpoint(chain, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

long find_threshold_alg1(const ChainParams& chain, double lambda, const SearchConfig& config) {
  require_positive_lambda(lambda);
  const double alpha = config.alpha.value_or(default_alpha(chain));
  if (!(alpha > 0.0)) throw DomainError("alpha", "must be > 0");
  if (lambda <= lambda_breakpoint(chain, 0)) return 0;

  std::vector<double> trace;
  double x = 0.0;
  double residual = lambda - lambda_breakpoint(chain, 0);
  for (std::size_t t = 0; t < config.max_iters; ++t) {
    x += alpha * residual;
    // lambda(.) is only defined on [0, inf); an overshoot below zero restarts at 0.
    x = std::max(x, 0.0);
    if (trace.size() < kTraceLimit) trace.push_back(x);
    const long k = static_cast<long>(std::floor(x));
    if (lambda_breakpoint(chain, k) < lambda && lambda <= lambda_breakpoint(chain, k + 1)) {
      return k + 1;
    }
    residual = lambda - lambda_interp(chain, x);
  }
  std::ostringstream msg;
  msg << "threshold iteration did not bracket lambda = " << lambda << " within "
      << config.max_iters << " steps (alpha = " << alpha << ", last x = " << x << ")";
  throw NoConvergence(msg.str(), config.max_iters, std::abs(residual), std::move(trace));
}

std::vector<long> tied_thresholds(const ChainParams& chain, double lambda, double rel_tol) {
  const long n_star = find_threshold_breakpoints(chain, lambda);
  const auto near = [&](long k) {
    const double breakpoint = lambda_breakpoint(chain, k);
    return std::abs(lambda - breakpoint) <= rel_tol * breakpoint;
  };
  std::vector<long> result;
  if (n_star > 0 && near(n_star - 1)) result.push_back(n_star - 1);
  result.push_back(n_star);
  if (near(n_star)) result.push_back(n_star + 1);
  return result;
}

long find_threshold(const ChainParams& chain, double lambda, SearchMethod method,
                    const SearchConfig& config) {
  switch (method) {
    case SearchMethod::Alg1:
      return find_threshold_alg1(chain, lambda, config);
    case SearchMethod::Breakpoints:
      return find_threshold_breakpoints(chain, lambda);
    case SearchMethod::Scan:
      return find_threshold_scan(chain, lambda, config.n_cap);
  }
  return find_threshold_breakpoints(chain, lambda);
}

}  // namespace jamopt
