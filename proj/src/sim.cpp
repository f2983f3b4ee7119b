#include "jamopt/sim.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "jamopt/errors.hpp"

namespace jamopt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Running totals plus 100 contiguous batch sums for batch-means errors.
class BatchStats {
 public:
  BatchStats(std::uint64_t count, double lambda) : count_(count), lambda_(lambda) {
    batches_ = count >= static_cast<std::uint64_t>(kBatchCount) ? kBatchCount
                                                                 : static_cast<int>(count);
    batch_size_ = batches_ > 0 ? count / static_cast<std::uint64_t>(batches_) : 0;
    batch_state_.assign(static_cast<std::size_t>(batches_), 0);
    batch_active_.assign(static_cast<std::size_t>(batches_), 0);
  }

  void add(long age, Action action) {
    const std::uint64_t active = action == Action::Active ? 1 : 0;
    total_state_ += static_cast<std::uint64_t>(age);
    total_active_ += active;
    if (batch_size_ > 0) {
      const std::uint64_t batch = seen_ / batch_size_;
      if (batch < static_cast<std::uint64_t>(batches_)) {
        batch_state_[batch] += static_cast<std::uint64_t>(age);
        batch_active_[batch] += active;
      }
    }
    ++seen_;
  }

  void finish(TrajectoryStats& out) const {
    const double n = static_cast<double>(count_);
    out.mean_state = static_cast<double>(total_state_) / n;
    out.mean_active = static_cast<double>(total_active_) / n;
    out.mean_reward = out.mean_state - lambda_ * out.mean_active;
    if (batches_ < 2) {
      out.se_state = out.se_active = out.se_reward = 0.0;
      return;
    }
    std::vector<double> state(batch_state_.size());
    std::vector<double> active(batch_active_.size());
    std::vector<double> reward(batch_state_.size());
    const double size = static_cast<double>(batch_size_);
    for (std::size_t b = 0; b < state.size(); ++b) {
      state[b] = static_cast<double>(batch_state_[b]) / size;
      active[b] = static_cast<double>(batch_active_[b]) / size;
      reward[b] = state[b] - lambda_ * active[b];
    }
    out.se_state = standard_error(state);
    out.se_active = standard_error(active);
    out.se_reward = standard_error(reward);
  }

 private:
  static double standard_error(const std::vector<double>& means) {
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(means.size());
    double ss = 0.0;
    for (double m : means) ss += (m - mean) * (m - mean);
    const double k = static_cast<double>(means.size());
    return std::sqrt(ss / (k - 1.0) / k);
  }

  std::uint64_t count_;
  double lambda_;
  int batches_ = 0;
  std::uint64_t batch_size_ = 0;
  std::uint64_t seen_ = 0;
  std::uint64_t total_state_ = 0;
  std::uint64_t total_active_ = 0;
  std::vector<std::uint64_t> batch_state_;
  std::vector<std::uint64_t> batch_active_;
};

void check_horizon(std::uint64_t slots, std::uint64_t burn_in) {
  if (!(slots > burn_in)) throw DomainError("slots", "must exceed burn_in");
}

void check_policy(const AttackPolicy& policy) {
  std::visit(Overloaded{
                 [](const ThresholdPolicy& p) {
                   if (p.n < 0) throw DomainError("n", "must be nonnegative");
                 },
                 [](const OppositeThresholdPolicy& p) {
                   if (p.n < 0) throw DomainError("n", "must be nonnegative");
                 },
                 [](const UniformRandomPolicy& p) {
                   if (!(p.rho >= 0.0 && p.rho <= 1.0)) {
                     throw DomainError("rho", "must lie in [0, 1]");
                   }
                 },
             },
             policy);
}

TrajectoryStats make_stats(std::uint64_t slots, std::uint64_t burn_in, double lambda,
                           std::uint64_t seed, std::uint64_t stream) {
  TrajectoryStats stats;
  stats.slots = slots;
  stats.burn_in = burn_in;
  stats.lambda = lambda;
  stats.seed = seed;
  stats.stream = stream;
  return stats;
}

}  // namespace

std::string describe(const AttackPolicy& policy) {
  return std::visit(Overloaded{
                        [](const ThresholdPolicy& p) { return "threshold(" + std::to_string(p.n) + ")"; },
                        [](const UniformRandomPolicy& p) {
                          std::ostringstream out;
                          out << "random(" << p.rho << ")";
                          return out.str();
                        },
                        [](const OppositeThresholdPolicy& p) {
                          return "opposite(" + std::to_string(p.n) + ")";
                        },
                    },
                    policy);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

Action choose_action(const AttackPolicy& policy, long age, RandomStream& rng) {
  return std::visit(Overloaded{
                        [age](const ThresholdPolicy& p) {
                          return age >= p.n ? Action::Active : Action::Passive;
                        },
                        [age](const OppositeThresholdPolicy& p) {
                          return age < p.n ? Action::Active : Action::Passive;
                        },
                        [&rng](const UniformRandomPolicy& p) {
                          return rng.bernoulli(p.rho) ? Action::Active : Action::Passive;
                        },
                    },
                    policy);
}

void FullSystem::flip_source(RandomStream& rng) {
  if (metric_ == Metric::AoII && rng.bernoulli(params_.r)) {
    state_.source_bit ^= 1;
  }
}

bool FullSystem::transmit(Action action, RandomStream& rng) {
  const bool channel_up = rng.bernoulli(params_.p);
  const bool jammed = action == Action::Active && rng.bernoulli(params_.q);
  const bool delivered = channel_up && !jammed;
  if (delivered) state_.estimate_bit = state_.source_bit;
  if (metric_ == Metric::AoI) {
    state_.age = delivered ? 0 : state_.age + 1;
  } else {
    state_.age = state_.source_bit == state_.estimate_bit ? 0 : state_.age + 1;
  }
  return delivered;
}

TrajectoryStats simulate_aggregate(const SystemParams& params, Metric metric,
                                   const AttackPolicy& policy, std::uint64_t slots,
                                   std::uint64_t burn_in, std::uint64_t seed,
                                   std::uint64_t stream) {
  check_horizon(slots, burn_in);
  check_policy(policy);
  const IncrementKernel kernel = make_kernel(params, metric);
  RandomStream rng(seed, stream);
  BatchStats acc(slots - burn_in, params.lambda);
  long age = 0;
  for (std::uint64_t t = 0; t < slots; ++t) {
    const Action action = choose_action(policy, age, rng);
    if (t >= burn_in) acc.add(age, action);
    age = rng.bernoulli(kernel.at(age == 0, action)) ? age + 1 : 0;
  }
  TrajectoryStats stats = make_stats(slots, burn_in, params.lambda, seed, stream);
  acc.finish(stats);
  return stats;
}

TrajectoryStats simulate_full(const SystemParams& params, Metric metric,
                              const AttackPolicy& policy, std::uint64_t slots,
                              std::uint64_t burn_in, std::uint64_t seed,
                              std::uint64_t stream) {
  check_horizon(slots, burn_in);
  check_policy(policy);
  FullSystem system(params, metric);
  RandomStream rng(seed, stream);
  BatchStats acc(slots - burn_in, params.lambda);
  for (std::uint64_t t = 0; t < slots; ++t) {
    system.flip_source(rng);
    const long age = system.state().age;
    const Action action = choose_action(policy, age, rng);
    if (t >= burn_in) acc.add(age, action);
    system.transmit(action, rng);
  }
  TrajectoryStats stats = make_stats(slots, burn_in, params.lambda, seed, stream);
  acc.finish(stats);
  return stats;
}

std::string_view to_string(SimEngine engine) {
  return engine == SimEngine::Full ? "full" : "aggregate";
}

std::optional<SimEngine> parse_sim_engine(std::string_view text) {
  if (text == "aggregate") return SimEngine::Aggregate;
  if (text == "full") return SimEngine::Full;
  return std::nullopt;
}

TrajectoryStats simulate(SimEngine engine, const SystemParams& params, Metric metric,
                         const AttackPolicy& policy, std::uint64_t slots, std::uint64_t burn_in,
                         std::uint64_t seed, std::uint64_t stream) {
  if (engine == SimEngine::Full) {
    return simulate_full(params, metric, policy, slots, burn_in, seed, stream);
  }
  return simulate_aggregate(params, metric, policy, slots, burn_in, seed, stream);
}

EmpiricalKernel empirical_kernel(const SystemParams& params, Metric metric, std::uint64_t slots,
                                 std::uint64_t seed) {
  if (slots < 100'000) throw DomainError("slots", "must be >= 100000");
  const AttackPolicy coin = UniformRandomPolicy{0.5};
  FullSystem system(params, metric);
  RandomStream rng(seed, 0);
  EmpiricalKernel table;
  for (std::uint64_t t = 0; t < slots; ++t) {
    system.flip_source(rng);
    const long before = system.state().age;
    const Action action = choose_action(coin, before, rng);
    system.transmit(action, rng);
    KernelCell& cell = table.cells[before == 0 ? 0 : 1][action == Action::Active ? 1 : 0];
    ++cell.visits;
    if (system.state().age == before + 1) ++cell.increments;
  }
  for (auto& row : table.cells) {
    for (auto& cell : row) {
      if (cell.visits < 1000) {
        std::ostringstream msg;
        msg << "a kernel cell received only " << cell.visits << " visits in " << slots
            << " slots";
        throw InsufficientSamples(msg.str());
      }
      const double n = static_cast<double>(cell.visits);
      cell.frequency = static_cast<double>(cell.increments) / n;
      cell.std_error = std::sqrt(cell.frequency * (1.0 - cell.frequency) / n);
    }
  }
  return table;
}

}  // namespace jamopt
