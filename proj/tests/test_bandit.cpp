#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "banditlab/agents.hpp"
#include "banditlab/bandit.hpp"
#include "banditlab/zoo.hpp"

using namespace banditlab;

namespace {

ModulatedBernoulliSpec fairSpec(int numActions, double qbar) {
  return ModulatedBernoulliSpec::symmetric(numActions, FiniteDist::uniformOver({0.0, 1.0}), qbar);
}

struct BrokenPolicy : Policy {
  int numActions() const override { return 2; }
  Eigen::VectorXd actionDistribution(const History& h) const override {
    Eigen::VectorXd v(2);
    v << 0.7, (h.size() >= 2 ? 0.4 : 0.3);  // invalid from timestep 2 on
    return v;
  }
};

struct LatentlessBandit : BanditProcess {
  int numActions() const override { return 1; }
  EpisodeDraw sampleEpisode(int horizon, RngStream) const override {
    return {Eigen::MatrixXd::Zero(horizon, 1), std::nullopt};
  }
};

}  // namespace

TEST_CASE("single-action bandit always plays action 0") {
  const auto bandit = makeModulated(fairSpec(1, 0.5));
  const EpisodeLog log = runEpisode(*bandit, *uniformPolicy(1), 3, std::uint64_t(11));
  for (const auto& step : log.history) CHECK(step.action == 0);
}

TEST_CASE("deterministic policy is followed verbatim") {
  const auto bandit = makeModulated(fairSpec(2, 0.5));
  const EpisodeLog log = runEpisode(*bandit, *constantPolicy(1, 2), 5, std::uint64_t(3));
  for (const auto& step : log.history) CHECK(step.action == 1);
}

TEST_CASE("same seed gives identical logs") {
  const auto bandit = makeModulated(fairSpec(2, 0.3));
  const auto policy = uniformPolicy(2);
  const EpisodeLog a = runEpisode(*bandit, *policy, 6, std::uint64_t(99));
  const EpisodeLog b = runEpisode(*bandit, *policy, 6, std::uint64_t(99));
  CHECK(a == b);
}

TEST_CASE("observed rewards match the chosen cells of the full matrix") {
  const auto bandit = makeModulated(fairSpec(2, 0.4));
  const auto policy = uniformPolicy(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EpisodeLog log = runEpisode(*bandit, *policy, 4, seed);
    for (int t = 0; t < 4; ++t)
      CHECK(log.history[t].reward == log.fullRewards(t, log.history[t].action));
  }
}

TEST_CASE("invalid policy distribution names the timestep") {
  const auto bandit = makeModulated(fairSpec(2, 0.5));
  try {
    runEpisode(*bandit, BrokenPolicy{}, 4, std::uint64_t(1));
    FAIL("expected ContractViolation");
  } catch (const ContractViolation& e) {
    CHECK(std::string(e.what()).find("timestep 2") != std::string::npos);
  }
}

TEST_CASE("latent-reading policy needs a latent trace") {
  CHECK_THROWS_AS(runEpisode(LatentlessBandit{}, *dynamicOracle(1), 2, std::uint64_t(1)),
                  ContractViolation);
}

TEST_CASE("batch of one equals the derived single episode") {
  const auto bandit = makeModulated(fairSpec(2, 0.5));
  const auto policy = uniformPolicy(2);
  const auto batch = runBatch(*bandit, *policy, 4, 1, 77);
  const EpisodeLog single = runEpisode(*bandit, *policy, 4, RngStream(77).child(0));
  CHECK(batch.size() == 1);
  CHECK(batch[0] == single);
}

TEST_CASE("batch results are independent of thread count") {
  const auto bandit = makeModulated(fairSpec(2, 0.6));
  const auto policy = uniformPolicy(2);
  const auto serial = runBatch(*bandit, *policy, 5, 64, 13, 1);
  const auto parallel = runBatch(*bandit, *policy, 5, 64, 13, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("distinct master seeds give different logs") {
  const auto bandit = makeModulated(fairSpec(2, 0.5));
  const auto policy = uniformPolicy(2);
  const auto a = runBatch(*bandit, *policy, 8, 4, 1000);
  const auto b = runBatch(*bandit, *policy, 8, 4, 1001);
  bool anyDiff = false;
  for (size_t i = 0; i < a.size(); ++i) anyDiff = anyDiff || !(a[i] == b[i]);
  CHECK(anyDiff);
}

TEST_CASE("dynamic oracle plays the latent argmax") {
  const auto bandit = makeModulated(fairSpec(2, 0.5));
  const auto oracle = dynamicOracle(2);
  const EpisodeLog log = runEpisode(*bandit, *oracle, 6, std::uint64_t(21));
  for (int t = 0; t < 6; ++t) {
    Eigen::Index best;
    log.latents->row(t).maxCoeff(&best);
    // Ties go to the lowest index, matching the oracle's rule.
    Eigen::Index lowestTied = 0;
    while (log.latents->coeff(t, lowestTied) != log.latents->row(t).maxCoeff()) ++lowestTied;
    CHECK(log.history[t].action == static_cast<int>(lowestTied));
  }
}
