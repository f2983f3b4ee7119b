#include "jamopt/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "jamopt/closedform.hpp"
#include "jamopt/csv.hpp"
#include "jamopt/errors.hpp"
#include "jamopt/model.hpp"
#include "jamopt/search.hpp"
#include "jamopt/sim.hpp"
#include "jamopt/sweep.hpp"
#include "jamopt/verify.hpp"

namespace jamopt {

namespace {

struct LinkOptions {
  std::string metric;
  double p = 0.0;
  double q = 0.0;
  double r = 0.25;
  CLI::Option* r_option = nullptr;
};

void add_link_options(CLI::App& sub, LinkOptions& link) {
  sub.add_option("--metric", link.metric, "Age metric")
      ->required()
      ->check(CLI::IsMember({"aoi", "aoii"}));
  sub.add_option("--p", link.p, "Channel success probability per slot")->required();
  sub.add_option("--q", link.q, "Jamming success probability per attack")->required();
  link.r_option = sub.add_option("--r", link.r, "Source flip probability (required for aoii)");
}

Metric metric_of(const LinkOptions& link) { return *parse_metric(link.metric); }

SystemParams params_of(const LinkOptions& link, double lambda, std::ostream& err) {
  if (metric_of(link) == Metric::AoII && link.r_option->count() == 0) {
    throw DomainError("r", "is required for the aoii metric");
  }
  return validate_params(link.p, link.q, link.r, lambda,
                         [&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
}

void write_link_prefix(std::ostream& out, const LinkOptions& link, const SystemParams& params) {
  out << link.metric << ',' << format_real(params.p) << ',' << format_real(params.q) << ','
      << format_real(params.r) << ',' << format_real(params.lambda);
}

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config", "cannot open '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config", path + ":" + std::to_string(line_number) + ": expected key=value");
    }
    entries[trim(std::string_view(content).substr(0, eq))] =
        trim(std::string_view(content).substr(eq + 1));
  }
  return entries;
}

// Pulls "--config FILE" out of the argument list and appends "--key value"
// for every config entry the chosen subcommand accepts and the command line
// did not already set.
std::vector<std::string> merge_config(std::vector<std::string> args, const CLI::App& app) {
  std::string path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config" && it + 1 != args.end()) {
      path = *(it + 1);
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (path.empty()) return args;

  const CLI::App* sub = nullptr;
  for (const std::string& arg : args) {
    for (const CLI::App* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == arg) sub = candidate;
    }
    if (sub != nullptr) break;
  }
  if (sub == nullptr) return args;

  const auto given = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&flag](const std::string& arg) {
      return arg == flag || arg.rfind(flag + "=", 0) == 0;
    });
  };
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    if (sub->get_option_no_throw(flag) == nullptr) continue;
    if (given(flag)) continue;
    if (sub->get_option_no_throw(flag)->get_type_size() == 0) {
      if (value == "true" || value == "1") args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

std::vector<SweepPolicy> parse_policies(const std::string& text) {
  std::vector<SweepPolicy> policies;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto policy = parse_sweep_policy(trim(item));
    if (!policy) throw DomainError("policy", "unknown sweep policy '" + item + "'");
    policies.push_back(*policy);
  }
  if (policies.empty()) throw DomainError("policy", "at least one policy is required");
  return policies;
}

void write_file_atomically(const std::string& path, const std::vector<SweepRow>& rows) {
  const std::string partial = path + ".partial";
  {
    std::ofstream file(partial, std::ios::binary | std::ios::trunc);
    if (!file) throw DomainError("out", "cannot write '" + path + "'");
    write_sweep_csv(file, rows);
    file.flush();
    if (!file) {
      file.close();
      std::remove(partial.c_str());
      throw DomainError("out", "failed while writing '" + path + "'");
    }
  }
  if (std::rename(partial.c_str(), path.c_str()) != 0) {
    std::remove(partial.c_str());
    throw DomainError("out", "cannot move output into place at '" + path + "'");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal jamming policies against AoI/AoII status updating"};
  app.name("jamopt");
  app.require_subcommand(1);

  // solve
  LinkOptions solve_link;
  double solve_lambda = 0.0;
  std::string solve_method = "breakpoints";
  double solve_alpha = 0.0;
  SearchConfig solve_config;
  CLI::App* solve = app.add_subcommand("solve", "Optimal threshold for one energy cost");
  add_link_options(*solve, solve_link);
  solve->add_option("--lambda", solve_lambda, "Energy cost per attacked slot")->required();
  solve->add_option("--method", solve_method, "Threshold search")
      ->check(CLI::IsMember({"alg1", "breakpoints", "scan"}));
  CLI::Option* alpha_option =
      solve->add_option("--alpha", solve_alpha, "Step size for alg1 (default: slope-scaled)");
  solve->add_option("--max-iters", solve_config.max_iters, "Iteration cap for alg1");
  solve->add_option("--n-cap", solve_config.n_cap, "Upper bound for the scan");

  // eval
  LinkOptions eval_link;
  double eval_lambda = 0.0;
  long eval_n = 0;
  CLI::App* eval = app.add_subcommand("eval", "Closed-form performance of threshold n");
  add_link_options(*eval, eval_link);
  eval->add_option("--lambda", eval_lambda, "Energy cost per attacked slot")->required();
  eval->add_option("--n", eval_n, "Threshold")->required()->check(CLI::NonNegativeNumber);

  // simulate
  LinkOptions sim_link;
  double sim_lambda = 0.0;
  std::string sim_policy = "threshold";
  long sim_n = 0;
  double sim_rho = 0.5;
  std::string sim_engine = "aggregate";
  SimSettings sim_settings;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate for one policy");
  add_link_options(*simulate_cmd, sim_link);
  simulate_cmd->add_option("--lambda", sim_lambda, "Energy cost per attacked slot")->required();
  simulate_cmd->add_option("--policy", sim_policy, "Attack policy")
      ->check(CLI::IsMember({"threshold", "random", "opposite"}));
  CLI::Option* sim_n_option = simulate_cmd->add_option(
      "--n", sim_n, "Threshold for threshold/opposite (default: optimal)");
  simulate_cmd->add_option("--rho", sim_rho, "Attack probability for the random policy");
  simulate_cmd->add_option("--engine", sim_engine, "Simulation model")
      ->check(CLI::IsMember({"aggregate", "full"}));
  simulate_cmd->add_option("--slots", sim_settings.slots, "Simulated slots");
  simulate_cmd->add_option("--burn-in", sim_settings.burn_in, "Slots discarded before statistics");
  simulate_cmd->add_option("--seed", sim_settings.seed, "Random seed");

  // sweep
  LinkOptions sweep_link;
  SweepSpec sweep_spec;
  std::string sweep_policies = "optimal,opposite,random";
  std::string sweep_engine = "aggregate";
  std::string sweep_out;
  bool sweep_serial = false;
  SimSettings sweep_settings;
  CLI::App* sweep = app.add_subcommand("sweep", "CSV over a grid of energy costs");
  add_link_options(*sweep, sweep_link);
  sweep->add_option("--lambda-start", sweep_spec.lambda_start, "First energy cost");
  sweep->add_option("--lambda-end", sweep_spec.lambda_end, "Last energy cost (inclusive)");
  sweep->add_option("--lambda-step", sweep_spec.lambda_step, "Grid step");
  sweep->add_option("--policy", sweep_policies, "Comma list of optimal,opposite,random");
  sweep->add_option("--engine", sweep_engine, "Simulation model for opposite/random rows")
      ->check(CLI::IsMember({"aggregate", "full"}));
  sweep->add_option("--slots", sweep_settings.slots, "Simulated slots per row");
  sweep->add_option("--burn-in", sweep_settings.burn_in, "Slots discarded before statistics");
  sweep->add_option("--seed", sweep_settings.seed, "Random seed");
  sweep->add_option("--out", sweep_out, "Output CSV path (default: stdout)");
  sweep->add_flag("--serial", sweep_serial, "Evaluate grid points on one thread");

  // verify
  std::string verify_level = "fast";
  CLI::App* verify = app.add_subcommand("verify", "Run the built-in oracle checks");
  verify->add_option("--level", verify_level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    std::vector<std::string> args = merge_config(raw_args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  try {
    if (solve->parsed()) {
      const SystemParams params = params_of(solve_link, solve_lambda, err);
      const ChainParams chain = to_chain(params, metric_of(solve_link));
      if (alpha_option->count() > 0) solve_config.alpha = solve_alpha;
      const SearchMethod method = *parse_search_method(solve_method);
      const long n_star = find_threshold(chain, params.lambda, method, solve_config);
      const PolicyEval eval_result = average_reward(chain, n_star, params.lambda);
      out << "metric,p,q,r,lambda,method,n_star,avg_age,avg_active,avg_reward\n";
      write_link_prefix(out, solve_link, params);
      out << ',' << solve_method << ',' << n_star << ',' << format_real(eval_result.avg_age) << ','
          << format_real(eval_result.avg_active) << ',' << format_real(eval_result.reward) << '\n';
    } else if (eval->parsed()) {
      const SystemParams params = params_of(eval_link, eval_lambda, err);
      const PolicyEval result = average_reward(to_chain(params, metric_of(eval_link)), eval_n,
                                               params.lambda);
      out << "metric,p,q,r,lambda,n,avg_age,avg_active,avg_reward\n";
      write_link_prefix(out, eval_link, params);
      out << ',' << eval_n << ',' << format_real(result.avg_age) << ','
          << format_real(result.avg_active) << ',' << format_real(result.reward) << '\n';
    } else if (simulate_cmd->parsed()) {
      const SystemParams params = params_of(sim_link, sim_lambda, err);
      const Metric metric = metric_of(sim_link);
      long n = sim_n;
      if (sim_n_option->count() == 0) {
        n = find_threshold_breakpoints(to_chain(params, metric), params.lambda);
      }
      AttackPolicy policy = ThresholdPolicy{n};
      if (sim_policy == "random") policy = UniformRandomPolicy{sim_rho};
      if (sim_policy == "opposite") policy = OppositeThresholdPolicy{n};
      const SimEngine engine = *parse_sim_engine(sim_engine);
      const TrajectoryStats stats = simulate(engine, params, metric, policy, sim_settings.slots,
                                             sim_settings.burn_in, sim_settings.seed);
      out << "metric,p,q,r,lambda,policy,n,engine,slots,burn_in,seed,mean_state,mean_active,"
             "mean_reward,se_state,se_active,se_reward\n";
      write_link_prefix(out, sim_link, params);
      out << ',' << describe(policy) << ',';
      if (sim_policy != "random") out << n;
      out << ',' << sim_engine << ',' << stats.slots << ',' << stats.burn_in << ',' << stats.seed
          << ',' << format_real(stats.mean_state) << ',' << format_real(stats.mean_active) << ','
          << format_real(stats.mean_reward) << ',' << format_real(stats.se_state) << ','
          << format_real(stats.se_active) << ',' << format_real(stats.se_reward) << '\n';
    } else if (sweep->parsed()) {
      sweep_spec.metric = metric_of(sweep_link);
      params_of(sweep_link, 1.0, err);
      sweep_spec.p = sweep_link.p;
      sweep_spec.q = sweep_link.q;
      sweep_spec.r = sweep_link.r;
      sweep_spec.policies = parse_policies(sweep_policies);
      sweep_settings.engine = *parse_sim_engine(sweep_engine);
      validate_sweep(sweep_spec);
      const std::vector<SweepRow> rows = run_sweep(
          sweep_spec, sweep_settings, sweep_serial ? Execution::Serial : Execution::Parallel);
      if (sweep_out.empty()) {
        write_sweep_csv(out, rows);
      } else {
        write_file_atomically(sweep_out, rows);
      }
    } else if (verify->parsed()) {
      const std::vector<CheckResult> results = run_verification(*parse_verify_level(verify_level));
      write_report(out, results);
      const auto failed = std::find_if(results.begin(), results.end(),
                                       [](const CheckResult& r) { return !r.passed; });
      if (failed != results.end()) {
        err << "verification failed: " << failed->name << ": " << failed->first_failure << '\n';
        return kExitVerifyFailed;
      }
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const InsufficientSamples& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const CapSuspicious& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const Unbounded& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const CapTooSmall& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  }
  return kExitOk;
}

}  // namespace jamopt
