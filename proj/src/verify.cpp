#include "jamopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "jamopt/closedform.hpp"
#include "jamopt/csv.hpp"
#include "jamopt/detail/closedform_generic.hpp"
#include "jamopt/errors.hpp"
#include "jamopt/mdp.hpp"
#include "jamopt/search.hpp"

namespace jamopt {

namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>,
                                           boost::multiprecision::et_off>;

CheckResult named_check(std::string name) {
  CheckResult result;
  result.name = std::move(name);
  return result;
}

std::string describe(const GridPoint& point, long n) {
  std::ostringstream out;
  out << "metric=" << to_string(point.metric) << " p=" << point.params.p
      << " q=" << point.params.q << " r=" << point.params.r << " n=" << n;
  return out.str();
}

void record(CheckResult& result, double error, double limit, const std::string& where) {
  ++result.cases;
  result.worst = std::max(result.worst, error);
  if (!(error <= limit) && result.passed) {
    result.passed = false;
    std::ostringstream out;
    out << where << " error=" << error << " limit=" << limit;
    result.first_failure = out.str();
  }
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

// Increment probability out of state i under threshold n, taken from the
// model so the n = 0 start state uses the physical active probability.
double increment_at(const GridPoint& point, const ChainParams& chain, long n, long i) {
  if (i == 0) {
    return increment_prob(point.params, point.metric, true,
                          n == 0 ? Action::Active : Action::Passive);
  }
  return i < n ? chain.b : chain.c;
}

std::vector<double> scenario_lambda_grid(double start, double end, double step) {
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((end - start) / step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  return grid;
}

}  // namespace

std::optional<VerifyLevel> parse_verify_level(std::string_view text) {
  if (text == "fast") return VerifyLevel::Fast;
  if (text == "full") return VerifyLevel::Full;
  return std::nullopt;
}

std::vector<GridPoint> verification_grid(VerifyLevel level) {
  const std::vector<double> full_pq{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> full_r{0.1, 0.25, 0.4, 0.5};
  const std::vector<double> fast_pq{0.3, 0.7};
  const std::vector<double> fast_r{0.25, 0.5};
  const auto& pq = level == VerifyLevel::Full ? full_pq : fast_pq;
  const auto& rs = level == VerifyLevel::Full ? full_r : fast_r;
  std::vector<GridPoint> grid;
  for (Metric metric : {Metric::AoI, Metric::AoII}) {
    for (double p : pq) {
      for (double q : pq) {
        for (double r : rs) {
          grid.push_back(GridPoint{validate_params(p, q, r, 1.0), metric});
        }
      }
    }
  }
  return grid;
}

SystemParams scenario_params(int scenario) {
  if (scenario == 2) return validate_params(0.1, 0.5, 0.5, 1.0);
  return validate_params(0.5, 0.5, 0.25, 1.0);
}

CheckResult check_pmf_balance(const std::vector<GridPoint>& grid, long max_n,
                              const PmfFunction& pmf) {
  CheckResult result = named_check("pmf-balance");
  for (const GridPoint& point : grid) {
    const ChainParams chain = to_chain(point.params, point.metric);
    for (long n = 0; n <= max_n; ++n) {
      // Inbound mass to 0: explicit for i <= n, geometric tail beyond.
      double inbound_zero = pmf(chain, n, n + 1);
      for (long i = 0; i <= n; ++i) {
        inbound_zero += (1.0 - increment_at(point, chain, n, i)) * pmf(chain, n, i);
      }
      double worst = std::abs(pmf(chain, n, 0) - inbound_zero);
      for (long j = 1; j <= n + 3; ++j) {
        const double inbound = increment_at(point, chain, n, j - 1) * pmf(chain, n, j - 1);
        worst = std::max(worst, std::abs(pmf(chain, n, j) - inbound));
      }
      record(result, worst, 1e-12, describe(point, n));
    }
  }
  return result;
}

CheckResult check_pmf_normalization(const std::vector<GridPoint>& grid, long max_n,
                                    const PmfFunction& pmf) {
  CheckResult result = named_check("pmf-normalization");
  for (const GridPoint& point : grid) {
    const ChainParams chain = to_chain(point.params, point.metric);
    for (long n = 0; n <= max_n; ++n) {
      double total = pmf(chain, n, n + 1) / (1.0 - chain.c);
      for (long i = 0; i <= n; ++i) total += pmf(chain, n, i);
      record(result, std::abs(total - 1.0), 1e-12, describe(point, n));
    }
  }
  return result;
}

CheckResult check_moments(const std::vector<GridPoint>& grid, long max_n) {
  CheckResult result = named_check("moments");
  for (const GridPoint& point : grid) {
    const ChainParams chain = to_chain(point.params, point.metric);
    const double c = chain.c;
    for (long n = 0; n <= max_n; ++n) {
      const double next = stationary_pmf(chain, n, n + 1);
      const double nn = static_cast<double>(n);
      double age_sum = next * ((nn + 1.0) / (1.0 - c) + c / ((1.0 - c) * (1.0 - c)));
      for (long i = 1; i <= n; ++i) age_sum += static_cast<double>(i) * stationary_pmf(chain, n, i);
      const double active_sum = n == 0 ? 1.0 : stationary_pmf(chain, n, n) + next / (1.0 - c);
      const double err = std::max(relative_error(average_age(chain, n), age_sum),
                                  relative_error(average_active(chain, n), active_sum));
      record(result, err, 1e-9, describe(point, n));
    }
    // Always-attack chain: up-probability c0 out of 0 and c elsewhere.
    const double c0 = increment_prob(point.params, point.metric, true, Action::Active);
    const double u0 = 1.0 / (1.0 + c0 / (1.0 - c));
    const double direct_age = u0 * c0 / ((1.0 - c) * (1.0 - c));
    record(result, relative_error(average_age(chain, 0), direct_age), 1e-9,
           describe(point, 0) + " (always-attack chain)");
  }
  return result;
}

CheckResult check_breakpoints(const std::vector<GridPoint>& grid, long max_n) {
  CheckResult result = named_check("breakpoints");
  for (const GridPoint& point : grid) {
    const ChainParams chain = to_chain(point.params, point.metric);
    const Wide a(chain.a);
    const Wide b(chain.b);
    const Wide c(chain.c);
    for (long n = 0; n <= max_n; ++n) {
      const Wide rise = detail::average_age(a, b, c, n + 1) - detail::average_age(a, b, c, n);
      const Wide run = detail::average_active(a, b, c, n + 1) - detail::average_active(a, b, c, n);
      const double ratio = static_cast<double>(rise / run);
      const double closed = lambda_breakpoint(chain, n);
      double err = relative_error(closed, ratio);
      if (!(lambda_breakpoint(chain, n + 1) > closed)) err = INFINITY;
      record(result, err, 1e-9, describe(point, n));
    }
  }
  return result;
}

CheckResult check_threshold_agreement(const std::vector<double>& lambdas) {
  CheckResult result = named_check("threshold-agreement");
  std::size_t alg1_stalls = 0;
  for (int scenario : {1, 2}) {
    for (Metric metric : {Metric::AoI, Metric::AoII}) {
      const ChainParams chain = to_chain(scenario_params(scenario), metric);
      for (double lambda : lambdas) {
        const std::vector<long> allowed = tied_thresholds(chain, lambda);
        const auto ok = [&](long n) {
          return std::find(allowed.begin(), allowed.end(), n) != allowed.end();
        };
        std::ostringstream where;
        where << "scenario=" << scenario << " metric=" << to_string(metric) << " lambda=" << lambda;
        bool agree = ok(find_threshold_scan(chain, lambda, 300)) &&
                     ok(find_threshold_breakpoints(chain, lambda));
        try {
          agree = agree && ok(find_threshold_alg1(chain, lambda));
        } catch (const NoConvergence&) {
          ++alg1_stalls;
        }
        record(result, agree ? 0.0 : 1.0, 0.0, where.str());
      }
    }
  }
  if (alg1_stalls > 0 && result.passed) {
    result.first_failure = std::to_string(alg1_stalls) + " alg1 runs hit the iteration cap";
  }
  return result;
}

CheckResult check_rvi(const std::vector<double>& lambdas) {
  CheckResult result = named_check("rvi");
  for (int scenario : {1, 2}) {
    for (Metric metric : {Metric::AoI, Metric::AoII}) {
      for (double lambda : lambdas) {
        const SystemParams params = scenario_params(scenario).with_lambda(lambda);
        const ChainParams chain = to_chain(params, metric);
        std::ostringstream where;
        where << "scenario=" << scenario << " metric=" << to_string(metric) << " lambda=" << lambda;
        try {
          const RviSolution solution = rvi_solve(params, metric);
          const std::vector<long> allowed = tied_thresholds(chain, lambda);
          const double best = average_reward(chain, allowed.front(), lambda).reward;
          double err = std::abs(solution.gain - best);
          const long* threshold = std::get_if<long>(&solution.threshold);
          if (threshold == nullptr ||
              std::find(allowed.begin(), allowed.end(), *threshold) == allowed.end()) {
            err = INFINITY;
          }
          record(result, err, 1e-3, where.str());
        } catch (const std::exception& e) {
          record(result, INFINITY, 1e-3, where.str() + " (" + e.what() + ")");
        }
      }
    }
  }
  return result;
}

std::vector<CheckResult> run_verification(VerifyLevel level) {
  const std::vector<GridPoint> grid = verification_grid(level);
  const PmfFunction pmf = [](const ChainParams& chain, long n, long i) {
    return stationary_pmf(chain, n, i);
  };
  std::vector<CheckResult> results;
  results.push_back(check_pmf_balance(grid, 12, pmf));
  results.push_back(check_pmf_normalization(grid, 12, pmf));
  results.push_back(check_moments(grid, 12));
  results.push_back(check_breakpoints(grid, 60));
  results.push_back(check_threshold_agreement(scenario_lambda_grid(1.0, 10.0, 0.1)));
  if (level == VerifyLevel::Full) {
    results.push_back(check_rvi(scenario_lambda_grid(1.0, 10.0, 1.0)));
  } else {
    results.push_back(check_rvi({1.5, 2.0, 7.0}));
  }
  return results;
}

void write_report(std::ostream& out, const std::vector<CheckResult>& results) {
  out << "check,status,cases,worst,detail\n";
  for (const CheckResult& r : results) {
    out << r.name << ',' << (r.passed ? "pass" : "fail") << ',' << r.cases << ','
        << format_real(r.worst) << ',';
    for (char ch : r.first_failure) out << (ch == ',' || ch == '\n' ? ';' : ch);
    out << '\n';
  }
}

}  // namespace jamopt
