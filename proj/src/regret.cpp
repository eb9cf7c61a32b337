#include "banditlab/regret.hpp"

#include <cmath>

#include "banditlab/classify.hpp"

namespace banditlab {

const char* toString(OracleProcessKind kind) {
  switch (kind) {
    case OracleProcessKind::DynamicTheta: return "DynamicTheta";
    case OracleProcessKind::PastRewards: return "PastRewards";
    case OracleProcessKind::InvariantLaw: return "InvariantLaw";
    case OracleProcessKind::OptimalHistory: return "OptimalHistory";
  }
  return "?";
}

Eigen::VectorXd RegretReport::runningSum(const Eigen::VectorXd& perStep) {
  Eigen::VectorXd cum(perStep.size());
  double acc = 0.0;
  for (int t = 0; t < perStep.size(); ++t) cum[t] = (acc += perStep[t]);
  return cum;
}

namespace {

// Marginal of theta_{t+1, a} (latent row t) over the prior's support.
Eigen::VectorXd thetaMarginal(const ModulatedBernoulliSpec& spec, ActionId a, int row) {
  Eigen::VectorXd v = spec.initialDist(a).probs;
  const Eigen::MatrixXd Mt = redrawTransition(spec.prior[a], spec.redrawProb[a]).transpose();
  for (int s = 0; s < row; ++s) v = Mt * v;
  return v;
}

// E[f(theta row)] over the product of per-action marginals at latent row t.
double expectOverThetaRow(const ModulatedBernoulliSpec& spec, int row,
                          const std::function<double(const Eigen::VectorXd&)>& f) {
  const int A = spec.numActions;
  std::vector<Eigen::VectorXd> marg(A);
  for (ActionId a = 0; a < A; ++a) marg[a] = thetaMarginal(spec, a, row);

  double result = 0.0;
  std::vector<int> idx(A, 0);
  Eigen::VectorXd theta(A);
  while (true) {
    double p = 1.0;
    for (int a = 0; a < A; ++a) {
      p *= marg[a][idx[a]];
      theta[a] = spec.prior[a].support[idx[a]];
    }
    if (p > 0.0) result += p * f(theta);
    int a = 0;
    while (a < A && ++idx[a] == spec.prior[a].size()) idx[a++] = 0;
    if (a == A) break;
  }
  return result;
}

// E[max_a E[R_{t+1,a} | R_{1:t}]] for each t, from the exact tensor law.
Eigen::VectorXd pastRewardsBenchmark(const FiniteBanditSpec& law) {
  Eigen::VectorXd bench(law.horizon);
  for (int t = 0; t < law.horizon; ++t) {
    // Group outcomes by the reward-row prefix R_{1:t}.
    std::map<std::vector<double>, std::pair<double, Eigen::VectorXd>> groups;
    for (const auto& o : law.outcomes) {
      if (o.prob <= 0.0) continue;
      std::vector<double> key;
      key.reserve(t * law.numActions);
      for (int s = 0; s < t; ++s)
        for (int a = 0; a < law.numActions; ++a) key.push_back(o.tensor(s, a));
      auto& [mass, sum] = groups.try_emplace(std::move(key), 0.0,
                                             Eigen::VectorXd::Zero(law.numActions).eval())
                              .first->second;
      mass += o.prob;
      sum += o.prob * o.tensor.row(t).transpose();
    }
    double value = 0.0;
    for (const auto& [key, group] : groups)
      value += group.first * (group.second / group.first).maxCoeff();
    bench[t] = value;
  }
  return bench;
}

Eigen::VectorXd agentTermFromJoint(const InteractionJoint& joint) {
  Eigen::VectorXd term = Eigen::VectorXd::Zero(joint.horizon);
  for (const auto& atom : joint.atoms)
    for (int t = 0; t < joint.horizon; ++t) term[t] += atom.prob * joint.observedReward(atom, t);
  return term;
}

}  // namespace

double expectedMaxTheta(const ModulatedBernoulliSpec& spec) {
  spec.validate();
  return expectOverThetaRow(spec, 0, [](const Eigen::VectorXd& theta) { return theta.maxCoeff(); });
}

RegretReport regretExact(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                         OracleProcessKind chiKind, const Budget& budget) {
  spec.validate();
  if (horizon < 1) throw SpecError("regretExact: horizon must be >= 1");

  if (policy.readsLatents() && chiKind != OracleProcessKind::DynamicTheta)
    throw SpecError("regretExact: latent-reading oracles are only evaluated against DynamicTheta");

  // Benchmark term.
  Eigen::VectorXd bench(horizon);
  FiniteBanditSpec law;
  bool haveLaw = false;
  switch (chiKind) {
    case OracleProcessKind::DynamicTheta:
      for (int t = 0; t < horizon; ++t)
        bench[t] = expectOverThetaRow(spec, t,
                                      [](const Eigen::VectorXd& th) { return th.maxCoeff(); });
      break;
    case OracleProcessKind::PastRewards:
      law = exactLaw(spec, horizon, budget);
      haveLaw = true;
      bench = pastRewardsBenchmark(law);
      break;
    case OracleProcessKind::InvariantLaw: {
      law = exactLaw(spec, horizon, budget);
      haveLaw = true;
      const ClassificationResult verdict = isStationary(law);
      if (!verdict.verdict)
        throw SpecError("regretExact: InvariantLaw benchmark requires a stationary instance (" +
                        (verdict.witness ? verdict.witness->description : std::string("no witness")) +
                        ")");
      bench.setConstant(law.marginalMean(0).maxCoeff());
      break;
    }
    case OracleProcessKind::OptimalHistory: {
      law = exactLaw(spec, horizon, budget);
      haveLaw = true;
      const BayesOptimalResult opt = solveBayesOptimal(law, budget);
      const InteractionJoint optJoint = buildInteractionJoint(law, *opt.policy, budget);
      // Group atoms by the oracle's own history prefix; the benchmark sees
      // the full next reward row, observed or not.
      for (int t = 0; t < horizon; ++t) {
        std::map<std::vector<double>, std::pair<double, Eigen::VectorXd>> groups;
        for (const auto& atom : optJoint.atoms) {
          std::vector<double> key;
          key.reserve(t * 2);
          for (int s = 0; s < t; ++s) {
            key.push_back(double(atom.actions[s]));
            key.push_back(optJoint.observedReward(atom, s));
          }
          auto& [mass, sum] = groups.try_emplace(std::move(key), 0.0,
                                                 Eigen::VectorXd::Zero(law.numActions).eval())
                                  .first->second;
          mass += atom.prob;
          sum += atom.prob * law.outcomes[atom.outcome].tensor.row(t).transpose();
        }
        double value = 0.0;
        for (const auto& [key, group] : groups)
          value += group.first * (group.second / group.first).maxCoeff();
        bench[t] = value;
      }
      break;
    }
  }

  // Agent term.
  Eigen::VectorXd agent(horizon);
  if (policy.readsLatents()) {
    // The oracle's choice depends only on the current latent row, and
    // E[R_{t+1,a} | theta_{t+1}] = theta_{t+1,a}.
    for (int t = 0; t < horizon; ++t)
      agent[t] = expectOverThetaRow(spec, t, [&](const Eigen::VectorXd& theta) {
        const Eigen::VectorXd dist = policy.actionDistributionGivenLatent({}, theta);
        return dist.dot(theta);
      });
  } else {
    if (!haveLaw) law = exactLaw(spec, horizon, budget);
    agent = agentTermFromJoint(buildInteractionJoint(law, policy, budget));
  }

  RegretReport report;
  report.chiKind = chiKind;
  report.perStep = bench - agent;
  report.cumulative = RegretReport::runningSum(report.perStep);
  report.exact = true;
  return report;
}

RegretReport regretMonteCarlo(const ModulatedBernoulliSpec& spec, const Policy& policy,
                              int horizon, OracleProcessKind chiKind, int numEpisodes,
                              std::uint64_t seed, int threads) {
  spec.validate();
  if (chiKind != OracleProcessKind::DynamicTheta && chiKind != OracleProcessKind::PastRewards)
    throw SpecError(std::string("regretMonteCarlo: ") + toString(chiKind) +
                    " is not estimable per episode");
  if (numEpisodes < 2) throw SpecError("regretMonteCarlo: need at least 2 episodes");

  const auto bandit = makeModulated(spec);
  const std::vector<EpisodeLog> logs = runBatch(*bandit, policy, horizon, numEpisodes, seed, threads);

  Eigen::MatrixXd samples(numEpisodes, horizon);
  for (int e = 0; e < numEpisodes; ++e) {
    const EpisodeLog& log = logs[e];
    if (chiKind == OracleProcessKind::DynamicTheta) {
      for (int t = 0; t < horizon; ++t)
        samples(e, t) = log.latents->row(t).maxCoeff() - log.history[t].reward;
    } else {
      BeliefState belief = BeliefState::prior(spec);
      for (int t = 0; t < horizon; ++t) {
        double bench = 0.0;
        for (ActionId a = 0; a < spec.numActions; ++a)
          bench = std::max(bench, predictedMean(belief, a, spec));
        samples(e, t) = bench - log.history[t].reward;
        belief = fullRowFilterStep(belief, log.fullRewards.row(t), spec);
      }
    }
  }

  RegretReport report;
  report.chiKind = chiKind;
  report.exact = false;
  report.numEpisodes = numEpisodes;
  report.perStep = samples.colwise().mean();
  report.stderrPerStep.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const double var =
        (samples.col(t).array() - report.perStep[t]).square().sum() / double(numEpisodes - 1);
    report.stderrPerStep[t] = std::sqrt(var / double(numEpisodes));
  }
  report.cumulative = RegretReport::runningSum(report.perStep);
  return report;
}

double dynamicRegretFloor(const ModulatedBernoulliSpec& spec) {
  spec.validate();
  if (!spec.stationaryStart())
    throw SpecError("dynamicRegretFloor: requires the stationary chain start");
  const double qbar = spec.redrawBar();  // throws when heterogeneous
  double maxMean = -std::numeric_limits<double>::infinity();
  for (ActionId a = 0; a < spec.numActions; ++a) maxMean = std::max(maxMean, spec.prior[a].mean());
  return qbar * (expectedMaxTheta(spec) - maxMean);
}

double perActionChangeProb(const FiniteDist& prior, double q) {
  return q * (1.0 - prior.probs.squaredNorm());
}

VariationReport variationMetrics(const ModulatedBernoulliSpec& spec, int horizon) {
  spec.validate();
  if (horizon < 1) throw SpecError("variationMetrics: horizon must be >= 1");
  if (!spec.stationaryStart())
    throw SpecError("variationMetrics: requires the stationary chain start");

  // Stationary pair law per action: P(i, j) = p_i ((1-q) 1{i=j} + q p_j).
  const int A = spec.numActions;
  double noChangeAll = 1.0;
  for (ActionId a = 0; a < A; ++a) noChangeAll *= 1.0 - perActionChangeProb(spec.prior[a], spec.redrawProb[a]);

  // E[max_a |theta_{t,a} - theta_{t+1,a}|] over the product of pair laws.
  std::vector<Eigen::MatrixXd> pair(A);
  for (ActionId a = 0; a < A; ++a) {
    const auto& d = spec.prior[a];
    pair[a] = d.probs.asDiagonal() * redrawTransition(d, spec.redrawProb[a]);
  }
  double variationPerStep = 0.0;
  std::vector<int> idx(A, 0);  // flattened (i, j) index per action
  while (true) {
    double p = 1.0;
    double maxAbs = 0.0;
    for (int a = 0; a < A; ++a) {
      const int m = spec.prior[a].size();
      const int i = idx[a] / m, j = idx[a] % m;
      p *= pair[a](i, j);
      maxAbs = std::max(maxAbs, std::abs(spec.prior[a].support[i] - spec.prior[a].support[j]));
    }
    if (p > 0.0) variationPerStep += p * maxAbs;
    int a = 0;
    while (a < A) {
      const int m = spec.prior[a].size();
      if (++idx[a] < m * m) break;
      idx[a++] = 0;
    }
    if (a == A) break;
  }

  VariationReport report;
  report.horizon = horizon;
  report.temporalVariation = double(horizon - 1) * variationPerStep;
  report.variationCount = double(horizon - 1) * (1.0 - noChangeAll);
  return report;
}

}  // namespace banditlab
