#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "jamopt/model.hpp"

namespace jamopt {

enum class SearchMethod { Alg1, Breakpoints, Scan };

std::string_view to_string(SearchMethod method);
std::optional<SearchMethod> parse_search_method(std::string_view text);

struct SearchConfig {
  // Step size of the interpolated fixed-point iteration; unset means
  // 1 / (lambda(1) - lambda(0)) clamped to [1e-3, 10].
  std::optional<double> alpha;
  std::size_t max_iters = 1'000'000;
  long n_cap = 300;
};

double default_alpha(const ChainParams& chain);

/// Brute-force argmax of the closed-form reward over n in [0, n_cap], ties
/// resolved toward the smaller n. Throws CapTooSmall if the reward still
/// increases at n_cap.
long find_threshold_scan(const ChainParams& chain, double lambda, long n_cap);

/// 0 if lambda <= lambda(0), else the unique n+1 with
/// lambda(n) < lambda <= lambda(n+1). Exponential bracketing followed by
/// integer bisection on the increasing breakpoint sequence.
long find_threshold_breakpoints(const ChainParams& chain, double lambda);

/// Iterates x <- x + alpha (lambda - lambda(x)) on the interpolated breakpoint
/// curve from x = 0 until floor(x) brackets lambda. Throws NoConvergence
/// (carrying the iterate trace) after `config.max_iters` steps.
long find_threshold_alg1(const ChainParams& chain, double lambda, const SearchConfig& config = {});

/// Thresholds that are optimal for `lambda`: the breakpoint answer plus its
/// neighbour when lambda sits within `rel_tol` of the shared breakpoint.
std::vector<long> tied_thresholds(const ChainParams& chain, double lambda, double rel_tol = 1e-9);

long find_threshold(const ChainParams& chain, double lambda, SearchMethod method,
                    const SearchConfig& config = {});

}  // namespace jamopt
