#include "banditlab/info.hpp"

#include <cmath>
#include <limits>

namespace banditlab {

namespace {
constexpr double kPassTol = 1e-9;
}

BoundReport BoundReport::make(std::string name, double lhs, double rhs) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = lhs <= rhs + kPassTol;
  return r;
}

namespace {

// Joint over (alpha codes per row, full-row codes per row) of the tensor law.
// Variable layout: one variable per reward row (codes of the row pattern),
// plus one variable per alpha row.
struct TensorVariables {
  std::vector<std::vector<int>> rowCode;    // [outcome][t]
  std::vector<std::vector<int>> alphaCode;  // [outcome][t]
};

TensorVariables codeTensorRows(const FiniteBanditSpec& law, const AlphaSpec& alpha) {
  TensorVariables vars;
  const int n = static_cast<int>(law.outcomes.size());
  vars.rowCode.assign(n, std::vector<int>(law.horizon));
  vars.alphaCode.assign(n, std::vector<int>(law.horizon));
  Codebook<std::vector<double>> rows, alphas;
  for (int o = 0; o < n; ++o) {
    const auto& tensor = law.outcomes[o].tensor;
    for (int t = 0; t < law.horizon; ++t) {
      std::vector<double> row(tensor.row(t).begin(), tensor.row(t).end());
      vars.rowCode[o][t] = rows.code(row);
      vars.alphaCode[o][t] = alphas.code(alpha.map(tensor.row(t).transpose(), t));
    }
  }
  return vars;
}

}  // namespace

PredictiveInfoReport predictiveInfo(const FiniteBanditSpec& law, const AlphaSpec& alpha,
                                    int horizon) {
  law.validate();
  if (horizon < 1 || horizon > law.horizon)
    throw SpecError("predictiveInfo: horizon outside the law's horizon");
  const int W = alpha.effectiveTruncation(law.horizon);
  const TensorVariables vars = codeTensorRows(law, alpha);

  PredictiveInfoReport report;
  report.truncation = W;
  report.horizon = horizon;
  report.perStep = Eigen::VectorXd::Zero(horizon);

  for (int t = 0; t < horizon; ++t) {
    // Delta_t = I(alpha_{t+2:W}; R_{t+1} | R_{1:t}); rows t+1..W-1 are the
    // alpha future, row t is R_{t+1}, rows 0..t-1 are the conditioning past.
    if (t + 1 >= W) continue;  // empty future
    JointDist joint({"future", "next", "past"});
    Codebook<std::vector<int>> futureCodes, pastCodes;
    for (int o = 0; o < static_cast<int>(law.outcomes.size()); ++o) {
      const double p = law.outcomes[o].prob;
      if (p <= 0.0) continue;
      std::vector<int> future(vars.alphaCode[o].begin() + (t + 1),
                              vars.alphaCode[o].begin() + W);
      std::vector<int> past(vars.rowCode[o].begin(), vars.rowCode[o].begin() + t);
      joint.add({futureCodes.code(future), vars.rowCode[o][t], pastCodes.code(past)}, p);
    }
    report.perStep[t] = mutualInfo(joint, {0}, {1}, {2});
  }
  report.cumulative = report.perStep.sum();
  return report;
}

PredictiveInfoReport predictiveInfo(const ModulatedBernoulliSpec& spec, const AlphaSpec& alpha,
                                    int horizon, const Budget& budget) {
  const int W = alpha.truncation < 0 ? horizon : alpha.truncation;
  return predictiveInfo(exactLaw(spec, std::max(horizon, W), budget), alpha, horizon);
}

BoundReport prop1Bound(const ModulatedBernoulliSpec& spec, int horizon, const AlphaSpec& alpha,
                       const Budget& budget) {
  spec.validate();
  if (!spec.stationaryStart())
    throw SpecError("prop1Bound: requires the stationary chain start");
  const double qbar = spec.redrawBar();
  for (ActionId a = 1; a < spec.numActions; ++a)
    if (spec.prior[a].support != spec.prior[0].support || spec.prior[a].probs != spec.prior[0].probs)
      throw SpecError("prop1Bound: requires one shared prior across actions");

  const double rhs = double(horizon) * double(spec.numActions) * (1.0 - qbar) *
                     entropy(spec.prior[0]);
  const PredictiveInfoReport info = predictiveInfo(spec, alpha, horizon, budget);
  BoundReport report = BoundReport::make("Prop1", info.cumulative, rhs);
  report.note = "V_T truncated at W=" + std::to_string(info.truncation);
  return report;
}

namespace {

// Per-step info gains I(alpha_{t+2:W}; A_t, R_{t+1,A_t} | H_t) on the
// interaction joint.
Eigen::VectorXd interactionInfoGains(const InteractionJoint& joint, const AlphaSpec& alpha,
                                     int horizon) {
  const int W = alpha.effectiveTruncation(joint.horizon);
  std::vector<std::vector<int>> alphaCode(joint.law.outcomes.size());
  {
    Codebook<std::vector<double>> alphas;
    for (size_t o = 0; o < joint.law.outcomes.size(); ++o) {
      const auto& tensor = joint.law.outcomes[o].tensor;
      alphaCode[o].resize(joint.horizon);
      for (int t = 0; t < joint.horizon; ++t)
        alphaCode[o][t] = alphas.code(alpha.map(tensor.row(t).transpose(), t));
    }
  }

  Eigen::VectorXd gains = Eigen::VectorXd::Zero(horizon);
  for (int t = 0; t < horizon; ++t) {
    if (t + 1 >= W) continue;
    JointDist dist({"future", "pair", "history"});
    Codebook<std::vector<int>> futureCodes;
    Codebook<std::vector<double>> pairCodes, historyCodes;
    for (const auto& atom : joint.atoms) {
      std::vector<int> future(alphaCode[atom.outcome].begin() + (t + 1),
                              alphaCode[atom.outcome].begin() + W);
      std::vector<double> pair = {double(atom.actions[t]), joint.observedReward(atom, t)};
      std::vector<double> hist;
      hist.reserve(2 * t);
      for (int s = 0; s < t; ++s) {
        hist.push_back(double(atom.actions[s]));
        hist.push_back(joint.observedReward(atom, s));
      }
      dist.add({futureCodes.code(future), pairCodes.code(pair), historyCodes.code(hist)},
               atom.prob);
    }
    gains[t] = mutualInfo(dist, {0}, {1}, {2});
  }
  return gains;
}

}  // namespace

InfoRatioReport infoRatio(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                          OracleProcessKind chiKind, const AlphaSpec& alpha,
                          const Budget& budget) {
  if (policy.readsLatents())
    throw SpecError("infoRatio: latent-reading oracles have no history-measurable information ratio");
  const RegretReport regret = regretExact(spec, policy, horizon, chiKind, budget);
  const FiniteBanditSpec law = exactLaw(spec, horizon, budget);
  const InteractionJoint joint = buildInteractionJoint(law, policy, budget);

  InfoRatioReport report;
  report.truncation = alpha.effectiveTruncation(horizon);
  report.regretIns = regret.perStep;
  report.infoGain = interactionInfoGains(joint, alpha, horizon);
  report.gamma.resize(horizon);
  report.infiniteFlagged.assign(horizon, false);
  for (int t = 0; t < horizon; ++t) {
    const double num = regret.perStep[t] * regret.perStep[t];
    const double den = report.infoGain[t];
    if (den > 0.0) {
      report.gamma[t] = num / den;
    } else if (num <= kPassTol * kPassTol) {
      report.gamma[t] = 0.0;  // zero-regret steps contribute nothing
    } else {
      report.gamma[t] = std::numeric_limits<double>::infinity();
      report.infiniteFlagged[t] = true;
    }
  }
  return report;
}

double telescopeInfoSum(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                        const AlphaSpec& alpha, const Budget& budget) {
  const FiniteBanditSpec law = exactLaw(spec, horizon, budget);
  const InteractionJoint joint = buildInteractionJoint(law, policy, budget);
  return interactionInfoGains(joint, alpha, horizon).sum();
}

BoundReport thm2Check(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                      OracleProcessKind chiKind, const AlphaSpec& alpha, const Budget& budget) {
  if (policy.readsLatents())
    throw SpecError("thm2Check: latent-reading oracles are outside the theorem's policy class");

  const InfoRatioReport ratio = infoRatio(spec, policy, horizon, chiKind, alpha, budget);
  const PredictiveInfoReport info = predictiveInfo(spec, alpha, horizon, budget);

  double gammaSum = 0.0;
  bool infinite = false;
  for (int t = 0; t < horizon; ++t) {
    if (ratio.infiniteFlagged[t]) infinite = true;
    gammaSum += ratio.gamma[t];
  }

  const double lhs = ratio.regretIns.sum();
  const double rhs =
      infinite ? std::numeric_limits<double>::infinity() : std::sqrt(gammaSum * info.cumulative);
  BoundReport report = BoundReport::make("Thm2", lhs, rhs);
  report.trivialInfinite = infinite;
  report.note = std::string("chi=") + toString(chiKind) +
                ", W=" + std::to_string(info.truncation) +
                (infinite ? "; infinite information ratio at some step" : "");
  return report;
}

BoundReport thm1Check(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                      const Budget& budget) {
  const double floorPerStep = dynamicRegretFloor(spec);
  const RegretReport regret =
      regretExact(spec, policy, horizon, OracleProcessKind::DynamicTheta, budget);
  BoundReport report = BoundReport::make("Thm1", double(horizon) * floorPerStep, regret.total());
  report.note = "lhs is the certified floor, rhs the exact dynamic regret";
  return report;
}

namespace {

// I(theta_2; theta_1) and I(theta_3; theta_2 | theta_1) for one action's
// redraw chain, from the exact pair and triple laws.
std::pair<double, double> chainInfoTerms(const FiniteDist& prior, double q) {
  const int m = prior.size();
  const Eigen::MatrixXd M = redrawTransition(prior, q);

  JointDist pair({"t2", "t1"});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) pair.add({j, i}, prior.probs[i] * M(i, j));
  const double pairInfo = mutualInfo(pair, {0}, {1});

  JointDist triple({"t3", "t2", "t1"});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        triple.add({k, j, i}, prior.probs[i] * M(i, j) * M(j, k));
  const double condInfo = mutualInfo(triple, {0}, {1}, {2});
  return {pairInfo, condInfo};
}

}  // namespace

BoundReport prop2Bound(const ModulatedBernoulliSpec& spec, int horizon, const AlphaSpec& alpha,
                       MarkovStateChoice stateChoice, const Budget& budget) {
  spec.validate();
  if (horizon < 1) throw SpecError("prop2Bound: horizon must be >= 1");

  double rhs = 0.0;
  std::string note;
  if (stateChoice == MarkovStateChoice::Theta) {
    if (!spec.stationaryStart())
      throw SpecError("prop2Bound: the theta state requires the stationary chain start");
    // Actions are independent, so the vector-state terms decompose into
    // per-action terms; the chain is strictly stationary, so all T-1
    // conditional terms coincide.
    for (ActionId a = 0; a < spec.numActions; ++a) {
      const auto [pairInfo, condInfo] = chainInfoTerms(spec.prior[a], spec.redrawProb[a]);
      rhs += pairInfo + double(horizon - 1) * condInfo;
    }
    note = "S_t = theta_t";
  } else {
    // S_t = R_{1:t}: the bound telescopes to
    // H(R_1) + sum_t H(R_{t+1} | R_{1:t}) = H(R_{1:T}).
    const FiniteBanditSpec law = exactLaw(spec, horizon, budget);
    JointDist joint({"tensor"});
    Codebook<std::vector<double>> codes;
    for (const auto& o : law.outcomes) {
      if (o.prob <= 0.0) continue;
      std::vector<double> key(o.tensor.data(), o.tensor.data() + o.tensor.size());
      joint.add({codes.code(key)}, o.prob);
    }
    rhs = entropy(joint);
    note = "S_t = R_{1:t}; bound equals H(R_{1:T})";
  }

  const PredictiveInfoReport info = predictiveInfo(spec, alpha, horizon, budget);
  BoundReport report = BoundReport::make("Prop2", info.cumulative, rhs);
  report.note = note + ", W=" + std::to_string(info.truncation);
  return report;
}

}  // namespace banditlab
