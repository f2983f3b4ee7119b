#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jamopt/model.hpp"

namespace jamopt {

enum class VerifyLevel { Fast, Full };

std::optional<VerifyLevel> parse_verify_level(std::string_view text);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  double worst = 0.0;  // largest observed error, in the check's own units
  std::string first_failure;
};

/// A closed-form stationary pmf u_n(i); swappable so a check can be run
/// against alternative expressions.
using PmfFunction = std::function<double(const ChainParams&, long n, long i)>;

struct GridPoint {
  SystemParams params;
  Metric metric = Metric::AoI;
};

/// p, q in {0.1, 0.3, 0.5, 0.7, 0.9}, r in {0.1, 0.25, 0.4, 0.5}, both
/// metrics (Full); a 2 x 2 x 2 subset of it (Fast).
std::vector<GridPoint> verification_grid(VerifyLevel level);

/// The two link settings used for the lambda sweeps.
SystemParams scenario_params(int scenario);

/// u(j) = P(up | j-1) u(j-1) for j >= 1 and the inbound mass to 0, summed
/// exactly with the geometric tail, to within 1e-12.
CheckResult check_pmf_balance(const std::vector<GridPoint>& grid, long max_n,
                              const PmfFunction& pmf);

/// Total mass, including the closed-form tail, equals 1 within 1e-12.
CheckResult check_pmf_normalization(const std::vector<GridPoint>& grid, long max_n,
                                    const PmfFunction& pmf);

/// average_age / average_active against moments of the pmf (relative 1e-9),
/// and n = 0 against the always-attack chain built from the model.
CheckResult check_moments(const std::vector<GridPoint>& grid, long max_n);

/// Breakpoint closed forms against the ratio of moment differences evaluated
/// in 120-digit arithmetic (relative 1e-9), and strict monotonicity in n.
CheckResult check_breakpoints(const std::vector<GridPoint>& grid, long max_n);

/// Scan, breakpoint and interpolated-iteration searches agree on the lambda grid.
CheckResult check_threshold_agreement(const std::vector<double>& lambdas);

/// Relative value iteration gain and policy agree with the closed form.
CheckResult check_rvi(const std::vector<double>& lambdas);

std::vector<CheckResult> run_verification(VerifyLevel level);

/// One CSV line per check: check,status,cases,worst,detail.
void write_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace jamopt
