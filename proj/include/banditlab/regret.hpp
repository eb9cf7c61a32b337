#pragma once

#include "banditlab/agents.hpp"
#include "banditlab/history_tree.hpp"

namespace banditlab {

// The process chi_t the benchmark oracle observes before acting:
//   DynamicTheta   chi_t = theta_{t+1}      (dynamic regret)
//   PastRewards    chi_t = R_{1:t}          (full past reward rows)
//   InvariantLaw   chi_t = stationary law   (best constant action)
//   OptimalHistory chi_t = H_t under the Bayes-optimal policy
enum class OracleProcessKind { DynamicTheta, PastRewards, InvariantLaw, OptimalHistory };

const char* toString(OracleProcessKind kind);

struct RegretReport {
  OracleProcessKind chiKind = OracleProcessKind::PastRewards;
  Eigen::VectorXd perStep;
  Eigen::VectorXd cumulative;
  bool exact = true;
  int numEpisodes = 0;           // Monte Carlo only
  Eigen::VectorXd stderrPerStep; // Monte Carlo only

  double total() const { return cumulative.size() ? cumulative[cumulative.size() - 1] : 0.0; }
  static Eigen::VectorXd runningSum(const Eigen::VectorXd& perStep);
};

// Exact expected per-step regret E[max_a E[R_{t+1,a} | chi_t]] - E[R_{t+1,A_t}].
// The benchmark term is enumerated from chi_t's exact law and the agent term
// from the (tensor, action-path) joint. DynamicTheta accepts the latent-
// reading oracle as the evaluated policy; every other computation requires a
// history policy.
RegretReport regretExact(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                         OracleProcessKind chiKind, const Budget& budget = {});

// Monte Carlo estimate with per-step standard errors. Only DynamicTheta
// (benchmark read off the latent trace) and PastRewards (benchmark from the
// full-row filter) are estimable per episode.
RegretReport regretMonteCarlo(const ModulatedBernoulliSpec& spec, const Policy& policy,
                              int horizon, OracleProcessKind chiKind, int numEpisodes,
                              std::uint64_t seed, int threads = 0);

// Theorem-1 per-step floor q-bar * (E[max_a theta_a] - max_a E[theta_a])
// under the product prior; multiplied by T it lower-bounds the dynamic
// regret of every policy. Requires homogeneous redraw probabilities.
double dynamicRegretFloor(const ModulatedBernoulliSpec& spec);

// E[max_a theta_{1,a}] under the product of the priors.
double expectedMaxTheta(const ModulatedBernoulliSpec& spec);

struct VariationReport {
  double temporalVariation = 0.0;
  double variationCount = 0.0;
  int horizon = 0;
};

// Existing temporal-variation and variation-count metrics, exact via the
// stationary pair law P(theta_t = i, theta_{t+1} = j) = p_i ((1-q)1{i=j} + q p_j)
// and independence across actions. Requires a stationary chain start.
VariationReport variationMetrics(const ModulatedBernoulliSpec& spec, int horizon);

// Per-action probability that theta changes value across one step.
double perActionChangeProb(const FiniteDist& prior, double q);

}  // namespace banditlab
