#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "banditlab/rng.hpp"
#include "banditlab/types.hpp"

namespace banditlab {

// One observed interaction step: the action taken and the reward it earned.
struct HistoryStep {
  ActionId action;
  double reward;
  bool operator==(const HistoryStep&) const = default;
};

// H_t: the ordered action-reward pairs observed so far. Only the chosen
// action's reward is ever stored.
using History = std::vector<HistoryStep>;

// A sampled reward matrix, one row per timestep, one column per action.
// Row t holds the rewards earned by acting at decision step t, and the
// optional latent row t holds the mean-reward vector that generated it.
struct EpisodeDraw {
  Eigen::MatrixXd rewards;
  std::optional<Eigen::MatrixXd> latents;
};

// A reward process with a finite action set. Sampling is a pure function of
// (horizon, stream): repeated calls with the same stream are bit-identical.
class BanditProcess {
 public:
  virtual ~BanditProcess() = default;
  virtual int numActions() const = 0;
  virtual EpisodeDraw sampleEpisode(int horizon, RngStream stream) const = 0;
};

// A decision rule mapping each history to a distribution over actions.
// Policies are immutable; randomized policies express their randomization
// through the returned distribution, which the episode loop samples from a
// stream disjoint from the environment's.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int numActions() const = 0;
  virtual Eigen::VectorXd actionDistribution(const History& history) const = 0;

  // Benchmark oracles read the latent mean-reward row for the step they act
  // on. They are not agents in the history-measurable sense and are gated
  // out of agent-only computations.
  virtual bool readsLatents() const { return false; }
  virtual Eigen::VectorXd actionDistributionGivenLatent(const History& history,
                                                        const Eigen::VectorXd& latentRow) const;
};

struct EpisodeLog {
  std::uint64_t seed = 0;
  History history;
  Eigen::MatrixXd fullRewards;
  std::optional<Eigen::MatrixXd> latents;

  bool operator==(const EpisodeLog& other) const;
};

// Runs one episode: at each step t the action is drawn from
// actionDistribution(H_t) using policy-stream randomness, then earns
// rewards(t, A_t) from a reward matrix drawn independently of the actions.
// Throws ContractViolation (naming the timestep) if the policy returns an
// invalid distribution.
EpisodeLog runEpisode(const BanditProcess& bandit, const Policy& policy, int horizon,
                      RngStream stream);
EpisodeLog runEpisode(const BanditProcess& bandit, const Policy& policy, int horizon,
                      std::uint64_t seed);

// Runs numEpisodes episodes; episode i uses the stream derived from
// (masterSeed, i), so results do not depend on scheduling or thread count.
// threads <= 0 selects the hardware concurrency.
std::vector<EpisodeLog> runBatch(const BanditProcess& bandit, const Policy& policy, int horizon,
                                 int numEpisodes, std::uint64_t masterSeed, int threads = 0);

// Validates a policy output: non-negative entries summing to 1 within 1e-12.
void checkActionDistribution(const Eigen::VectorXd& dist, int numActions, int timestep);

}  // namespace banditlab
