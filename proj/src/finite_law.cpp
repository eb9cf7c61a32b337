#include "banditlab/finite_law.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace banditlab {

void FiniteBanditSpec::validate(double tol) const {
  if (horizon < 1 || numActions < 1)
    throw SpecError("FiniteBanditSpec: horizon and numActions must be >= 1");
  if (outcomes.empty()) throw SpecError("FiniteBanditSpec: no outcomes");
  double mass = 0.0;
  for (const auto& o : outcomes) {
    if (o.tensor.rows() != horizon || o.tensor.cols() != numActions)
      throw SpecError("FiniteBanditSpec: outcome tensor shape mismatch");
    if (o.prob < -tol) throw SpecError("FiniteBanditSpec: negative outcome probability");
    mass += o.prob;
  }
  if (std::abs(mass - 1.0) > tol)
    throw SpecError("FiniteBanditSpec: outcome probabilities sum to " + std::to_string(mass));
}

namespace {

std::vector<double> flatten(const Eigen::MatrixXd& m) {
  std::vector<double> key(m.size());
  int k = 0;
  for (int t = 0; t < m.rows(); ++t)
    for (int a = 0; a < m.cols(); ++a) key[k++] = m(t, a);
  return key;
}

}  // namespace

FiniteBanditSpec FiniteBanditSpec::normalized() const {
  std::map<std::vector<double>, double> acc;
  for (const auto& o : outcomes) {
    if (o.prob <= 0.0) continue;
    acc[flatten(o.tensor)] += o.prob;
  }
  FiniteBanditSpec out;
  out.horizon = horizon;
  out.numActions = numActions;
  out.outcomes.reserve(acc.size());
  for (const auto& [key, p] : acc) {
    Eigen::MatrixXd tensor(horizon, numActions);
    int k = 0;
    for (int t = 0; t < horizon; ++t)
      for (int a = 0; a < numActions; ++a) tensor(t, a) = key[k++];
    out.outcomes.push_back({std::move(tensor), p});
  }
  return out;
}

FiniteBanditSpec FiniteBanditSpec::truncated(int newHorizon) const {
  if (newHorizon < 1 || newHorizon > horizon)
    throw SpecError("FiniteBanditSpec::truncated: bad horizon");
  FiniteBanditSpec out;
  out.horizon = newHorizon;
  out.numActions = numActions;
  for (const auto& o : outcomes)
    out.outcomes.push_back({o.tensor.topRows(newHorizon), o.prob});
  return out.normalized();
}

Eigen::VectorXd FiniteBanditSpec::marginalMean(int t) const {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(numActions);
  for (const auto& o : outcomes) mean += o.prob * o.tensor.row(t).transpose();
  return mean;
}

AlphaSpec AlphaSpec::identity(int truncation) {
  AlphaSpec a;
  a.map = [](const Eigen::VectorXd& row, int) {
    return std::vector<double>(row.data(), row.data() + row.size());
  };
  a.truncation = truncation;
  return a;
}

int AlphaSpec::effectiveTruncation(int horizon) const {
  if (truncation < 0) return horizon;
  if (truncation > horizon) throw SpecError("AlphaSpec: truncation beyond horizon");
  return truncation;
}

Eigen::MatrixXd redrawTransition(const FiniteDist& prior, double q) {
  const int m = prior.size();
  Eigen::MatrixXd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = (1.0 - q) * (i == j ? 1.0 : 0.0) + q * prior.probs[j];
  return M;
}

Eigen::VectorXd perActionPathLaw(const FiniteDist& initial, const FiniteDist& prior, double q,
                                 int horizon) {
  const int m = prior.size();
  const Eigen::MatrixXd M = redrawTransition(prior, q);
  const std::int64_t numPaths = std::int64_t(1) << horizon;
  Eigen::VectorXd law(numPaths);

  for (std::int64_t path = 0; path < numPaths; ++path) {
    // Forward pass: v_t(i) = P(r_1..r_t, theta_t = support_i).
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) {
      const double lik = (path & 1) ? initial.support[i] : 1.0 - initial.support[i];
      v[i] = initial.probs[i] * lik;
    }
    for (int t = 1; t < horizon; ++t) {
      Eigen::VectorXd next = M.transpose() * v;
      const bool one = (path >> t) & 1;
      for (int i = 0; i < m; ++i) next[i] *= one ? prior.support[i] : 1.0 - prior.support[i];
      v = std::move(next);
    }
    law[path] = v.sum();
  }
  return law;
}

namespace {

FiniteBanditSpec productOfPathLaws(const std::vector<Eigen::VectorXd>& perAction, int horizon,
                                   const Budget& budget) {
  const int numActions = static_cast<int>(perAction.size());
  const std::int64_t pathsPerAction = std::int64_t(1) << horizon;
  double outcomesNeeded = 1.0;
  for (int a = 0; a < numActions; ++a) outcomesNeeded *= double(pathsPerAction);
  if (outcomesNeeded > double(budget.maxOutcomes))
    throw BudgetError("exactLaw: outcome count exceeds budget",
                      static_cast<std::int64_t>(outcomesNeeded));

  FiniteBanditSpec law;
  law.horizon = horizon;
  law.numActions = numActions;

  std::vector<std::int64_t> idx(numActions, 0);
  while (true) {
    double p = 1.0;
    for (int a = 0; a < numActions; ++a) p *= perAction[a][idx[a]];
    if (p > 0.0) {
      Eigen::MatrixXd tensor(horizon, numActions);
      for (int a = 0; a < numActions; ++a)
        for (int t = 0; t < horizon; ++t) tensor(t, a) = double((idx[a] >> t) & 1);
      law.outcomes.push_back({std::move(tensor), p});
    }
    int a = 0;
    while (a < numActions && ++idx[a] == pathsPerAction) idx[a++] = 0;
    if (a == numActions) break;
  }
  return law;
}

}  // namespace

FiniteBanditSpec exactLaw(const ModulatedBernoulliSpec& spec, int horizon, const Budget& budget) {
  spec.validate();
  if (horizon < 1) throw SpecError("exactLaw: horizon must be >= 1");
  std::vector<Eigen::VectorXd> perAction(spec.numActions);
  for (ActionId a = 0; a < spec.numActions; ++a)
    perAction[a] =
        perActionPathLaw(spec.initialDist(a), spec.prior[a], spec.redrawProb[a], horizon);
  return productOfPathLaws(perAction, horizon, budget);
}

FiniteBanditSpec exactLaw(const IidBernoulliSpec& spec, int horizon, const Budget& budget) {
  return exactLaw(spec.asModulated(), horizon, budget);
}

FiniteBanditSpec exactLaw(const NoiseCouplingSpec& spec, int horizon, const Budget& budget) {
  spec.validate();
  if (horizon < 1) throw SpecError("exactLaw: horizon must be >= 1");

  const int A = spec.numActions;
  std::int64_t thetaCombos = 1;
  for (const auto& d : spec.meanPrior) thetaCombos *= d.size();
  const double outcomesNeeded = double(thetaCombos) * std::pow(2.0, double(horizon * A));
  if (outcomesNeeded > double(budget.maxOutcomes))
    throw BudgetError("exactLaw: outcome count exceeds budget",
                      static_cast<std::int64_t>(outcomesNeeded));

  std::map<std::vector<double>, double> acc;

  std::vector<int> thetaIdx(A, 0);
  while (true) {
    double pTheta = 1.0;
    Eigen::VectorXd theta(A);
    for (int a = 0; a < A; ++a) {
      theta[a] = spec.meanPrior[a].support[thetaIdx[a]];
      pTheta *= spec.meanPrior[a].probs[thetaIdx[a]];
    }
    if (pTheta > 0.0) {
      // Per-row pattern laws given theta; rows are independent given theta.
      std::vector<std::vector<double>> rowLaw(horizon, std::vector<double>(1 << A, 0.0));
      for (int t = 0; t < horizon; ++t) {
        const bool shared =
            spec.mode == NoiseMode::DependentEvenSteps && ((t + 1) % 2 == 0);
        if (shared) {
          // One uniform drives every coordinate: pattern x has probability
          // equal to the length of {u : x_a = 1{u < theta_a} for all a}.
          for (int x = 0; x < (1 << A); ++x) {
            double lo = 0.0, hi = 1.0;
            for (int a = 0; a < A; ++a) {
              if ((x >> a) & 1)
                hi = std::min(hi, theta[a]);
              else
                lo = std::max(lo, theta[a]);
            }
            rowLaw[t][x] = std::max(0.0, hi - lo);
          }
        } else {
          for (int x = 0; x < (1 << A); ++x) {
            double p = 1.0;
            for (int a = 0; a < A; ++a) p *= ((x >> a) & 1) ? theta[a] : 1.0 - theta[a];
            rowLaw[t][x] = p;
          }
        }
      }
      // Expand the product over rows.
      std::vector<int> rowIdx(horizon, 0);
      while (true) {
        double p = pTheta;
        for (int t = 0; t < horizon; ++t) p *= rowLaw[t][rowIdx[t]];
        if (p > 0.0) {
          std::vector<double> key(horizon * A);
          for (int t = 0; t < horizon; ++t)
            for (int a = 0; a < A; ++a) key[t * A + a] = double((rowIdx[t] >> a) & 1);
          acc[key] += p;
        }
        int t = 0;
        while (t < horizon && ++rowIdx[t] == (1 << A)) rowIdx[t++] = 0;
        if (t == horizon) break;
      }
    }
    int a = 0;
    while (a < A && ++thetaIdx[a] == spec.meanPrior[a].size()) thetaIdx[a++] = 0;
    if (a == A) break;
  }

  FiniteBanditSpec law;
  law.horizon = horizon;
  law.numActions = A;
  for (const auto& [key, p] : acc) {
    Eigen::MatrixXd tensor(horizon, A);
    for (int t = 0; t < horizon; ++t)
      for (int a = 0; a < A; ++a) tensor(t, a) = key[t * A + a];
    law.outcomes.push_back({std::move(tensor), p});
  }
  return law;
}

}  // namespace banditlab
