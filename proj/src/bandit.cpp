#include "banditlab/bandit.hpp"

#include <cmath>
#include <thread>

namespace banditlab {

Eigen::VectorXd Policy::actionDistributionGivenLatent(const History& history,
                                                      const Eigen::VectorXd&) const {
  return actionDistribution(history);
}

bool EpisodeLog::operator==(const EpisodeLog& other) const {
  if (seed != other.seed || history != other.history) return false;
  if (fullRewards.rows() != other.fullRewards.rows() ||
      fullRewards.cols() != other.fullRewards.cols())
    return false;
  if (fullRewards != other.fullRewards) return false;
  if (latents.has_value() != other.latents.has_value()) return false;
  if (latents && *latents != *other.latents) return false;
  return true;
}

void checkActionDistribution(const Eigen::VectorXd& dist, int numActions, int timestep) {
  if (dist.size() != numActions)
    throw ContractViolation("policy returned a distribution of size " +
                            std::to_string(dist.size()) + " over " + std::to_string(numActions) +
                            " actions at timestep " + std::to_string(timestep));
  if ((dist.array() < 0).any())
    throw ContractViolation("policy returned a negative probability at timestep " +
                            std::to_string(timestep));
  if (std::abs(dist.sum() - 1.0) > 1e-12)
    throw ContractViolation("policy distribution sums to " + std::to_string(dist.sum()) +
                            " at timestep " + std::to_string(timestep));
}

EpisodeLog runEpisode(const BanditProcess& bandit, const Policy& policy, int horizon,
                      RngStream stream) {
  if (horizon < 1) throw SpecError("runEpisode: horizon must be >= 1");

  // Environment and policy randomness come from disjoint child streams, so
  // A_t is independent of the reward process given H_t by construction.
  EpisodeDraw draw = bandit.sampleEpisode(horizon, stream.child(0));
  RngStream policyStream = stream.child(1);

  EpisodeLog log;
  log.seed = stream.key();
  log.fullRewards = draw.rewards;
  log.latents = draw.latents;
  log.history.reserve(horizon);

  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd dist;
    if (policy.readsLatents()) {
      if (!draw.latents)
        throw ContractViolation("latent-reading policy on a bandit without a latent trace");
      dist = policy.actionDistributionGivenLatent(log.history, draw.latents->row(t));
    } else {
      dist = policy.actionDistribution(log.history);
    }
    checkActionDistribution(dist, bandit.numActions(), t);
    RngStream stepStream = policyStream.child(static_cast<std::uint64_t>(t));
    const ActionId a = stepStream.nextIndex(dist);
    log.history.push_back({a, draw.rewards(t, a)});
  }
  return log;
}

EpisodeLog runEpisode(const BanditProcess& bandit, const Policy& policy, int horizon,
                      std::uint64_t seed) {
  return runEpisode(bandit, policy, horizon, RngStream(seed));
}

std::vector<EpisodeLog> runBatch(const BanditProcess& bandit, const Policy& policy, int horizon,
                                 int numEpisodes, std::uint64_t masterSeed, int threads) {
  if (numEpisodes < 1) throw SpecError("runBatch: numEpisodes must be >= 1");
  std::vector<EpisodeLog> logs(numEpisodes);
  RngStream master(masterSeed);

  auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      logs[i] = runEpisode(bandit, policy, horizon, master.child(static_cast<std::uint64_t>(i)));
  };

  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 1 || numEpisodes < 2 * n) {
    worker(0, numEpisodes);
    return logs;
  }

  std::vector<std::thread> pool;
  const int chunk = (numEpisodes + n - 1) / n;
  for (int k = 0; k < n; ++k) {
    const int begin = k * chunk;
    const int end = std::min(numEpisodes, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();
  return logs;
}

}  // namespace banditlab
