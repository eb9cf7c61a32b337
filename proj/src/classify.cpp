#include "banditlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "banditlab/rng.hpp"

namespace banditlab {

std::map<std::vector<double>, double> selectionLaw(const FiniteBanditSpec& law,
                                                   const std::vector<int>& rows,
                                                   const std::vector<ActionId>& actions) {
  std::map<std::vector<double>, double> out;
  for (const auto& o : law.outcomes) {
    if (o.prob <= 0.0) continue;
    std::vector<double> path(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) path[k] = o.tensor(rows[k], actions[k]);
    out[std::move(path)] += o.prob;
  }
  return out;
}

double tvDistance(const std::map<std::vector<double>, double>& p,
                  const std::map<std::vector<double>, double>& q) {
  double tv = 0.0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    tv += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q)
    if (!p.count(k)) tv += v;
  return 0.5 * tv;
}

namespace {

std::string scopeNote(int horizon) {
  return "finite-horizon check at T=" + std::to_string(horizon) +
         "; a true verdict certifies this horizon only";
}

// Enumerates ordered injections of {0..k-1} into {0..T-1}.
bool nextInjection(std::vector<int>& sel, int T) {
  const int k = static_cast<int>(sel.size());
  std::vector<bool> used(T, false);
  for (int v : sel) used[v] = true;
  for (int pos = k - 1; pos >= 0; --pos) {
    used[sel[pos]] = false;
    for (int v = sel[pos] + 1; v < T; ++v) {
      if (used[v]) continue;
      sel[pos] = v;
      used[v] = true;
      for (int p = pos + 1; p < k; ++p)
        for (int w = 0; w < T; ++w)
          if (!used[w]) {
            sel[p] = w;
            used[w] = true;
            break;
          }
      return true;
    }
  }
  return false;
}

std::vector<int> firstInjection(int k) {
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

bool nextActionSeq(std::vector<ActionId>& seq, int A) {
  for (int i = static_cast<int>(seq.size()) - 1; i >= 0; --i) {
    if (++seq[i] < A) return true;
    seq[i] = 0;
  }
  return false;
}

std::vector<int> oneBased(const std::vector<int>& rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = rows[i] + 1;
  return out;
}

}  // namespace

ClassificationResult isStationary(const FiniteBanditSpec& law, double tol, const Budget& budget) {
  law.validate();
  const int T = law.horizon, A = law.numActions;

  // Work estimate: sum over k of A^k * T!/(T-k)! path-law comparisons.
  double work = 0.0;
  for (int k = 1; k <= T; ++k) {
    double inj = 1.0;
    for (int i = 0; i < k; ++i) inj *= double(T - i);
    work += std::pow(double(A), k) * inj;
  }
  if (work * double(law.outcomes.size()) > 4e9)
    throw BudgetError("isStationary: enumeration too large",
                      static_cast<std::int64_t>(work * double(law.outcomes.size())));
  (void)budget;

  ClassificationResult result;
  result.scope = scopeNote(T);

  // Every injection's path law must match the leading-timestep selection for
  // the same action sequence; equality against the canonical selection decides
  // equality between every pair of injections.
  for (int k = 1; k <= T; ++k) {
    std::vector<ActionId> actions(k, 0);
    do {
      const std::vector<int> canonical = firstInjection(k);
      const auto canonicalLaw = selectionLaw(law, canonical, actions);
      std::vector<int> rows = firstInjection(k);
      do {
        const auto pathLaw = selectionLaw(law, rows, actions);
        const double tv = tvDistance(canonicalLaw, pathLaw);
        if (tv > tol) {
          result.verdict = false;
          ClassWitness w;
          w.actions = actions;
          w.timestepsA = oneBased(canonical);
          w.timestepsB = oneBased(rows);
          w.tvDistance = tv;
          w.description = "reward laws differ between the two timestep selections";
          result.witness = std::move(w);
          return result;
        }
      } while (nextInjection(rows, T));
    } while (nextActionSeq(actions, A));
  }
  result.verdict = true;
  return result;
}

namespace {

std::map<std::vector<double>, double> permutedRowLaw(const FiniteBanditSpec& law,
                                                     const std::vector<int>& perm) {
  std::map<std::vector<double>, double> out;
  const int T = law.horizon, A = law.numActions;
  for (const auto& o : law.outcomes) {
    if (o.prob <= 0.0) continue;
    std::vector<double> key(T * A);
    for (int t = 0; t < T; ++t)
      for (int a = 0; a < A; ++a) key[t * A + a] = o.tensor(perm[t], a);
    out[std::move(key)] += o.prob;
  }
  return out;
}

}  // namespace

ClassificationResult isExchangeable(const FiniteBanditSpec& law, double tol, const Budget&,
                                    std::uint64_t sampleSeed, int sampleCount) {
  law.validate();
  const int T = law.horizon;

  ClassificationResult result;
  result.scope = scopeNote(T);

  const auto identityLaw = permutedRowLaw(law, firstInjection(T));
  auto check = [&](const std::vector<int>& perm) -> std::optional<double> {
    const double tv = tvDistance(identityLaw, permutedRowLaw(law, perm));
    if (tv > tol) return tv;
    return std::nullopt;
  };
  auto fail = [&](const std::vector<int>& perm, double tv) {
    result.verdict = false;
    ClassWitness w;
    w.permutation = oneBased(perm);
    w.tvDistance = tv;
    w.description = "reward-row law is not invariant under this timestep permutation";
    result.witness = std::move(w);
  };

  // Transpositions first: they give the most readable witnesses.
  for (int i = 0; i < T; ++i)
    for (int j = i + 1; j < T; ++j) {
      std::vector<int> perm = firstInjection(T);
      std::swap(perm[i], perm[j]);
      if (auto tv = check(perm)) {
        fail(perm, *tv);
        return result;
      }
    }

  if (T <= 8) {
    std::vector<int> perm = firstInjection(T);
    while (std::next_permutation(perm.begin(), perm.end())) {
      if (auto tv = check(perm)) {
        fail(perm, *tv);
        return result;
      }
    }
  } else {
    RngStream rng(sampleSeed);
    for (int s = 0; s < sampleCount; ++s) {
      std::vector<int> perm = firstInjection(T);
      for (int i = T - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<int>(rng.nextU64() % std::uint64_t(i + 1))]);
      if (auto tv = check(perm)) {
        fail(perm, *tv);
        return result;
      }
    }
    result.scope += "; permutations sampled (" + std::to_string(sampleCount) + " draws)";
  }

  result.verdict = true;
  return result;
}

ClassificationResult areEquivalent(const FiniteBanditSpec& lawA, const FiniteBanditSpec& lawB,
                                   double tol, const Budget&) {
  lawA.validate();
  lawB.validate();
  if (lawA.numActions != lawB.numActions)
    throw SpecError("areEquivalent: action sets differ");
  if (lawA.horizon != lawB.horizon) throw SpecError("areEquivalent: horizons differ");
  const int T = lawA.horizon, A = lawA.numActions;

  ClassificationResult result;
  result.scope = scopeNote(T);

  // Minimal witnesses: search action sequences by increasing length.
  for (int k = 1; k <= T; ++k) {
    const std::vector<int> rows = firstInjection(k);
    std::vector<ActionId> actions(k, 0);
    do {
      const auto pathA = selectionLaw(lawA, rows, actions);
      const auto pathB = selectionLaw(lawB, rows, actions);
      const double tv = tvDistance(pathA, pathB);
      if (tv > tol) {
        result.verdict = false;
        ClassWitness w;
        w.actions = actions;
        w.timestepsA = oneBased(rows);
        w.timestepsB = oneBased(rows);
        w.tvDistance = tv;
        w.description = "reward-path laws differ along this action sequence";
        result.witness = std::move(w);
        return result;
      }
    } while (nextActionSeq(actions, A));
  }
  result.verdict = true;
  return result;
}

FiniteBanditSpec diagonalBlockLaw(const FiniteBanditSpec& law, int blocks) {
  const int A = law.numActions;
  if (blocks < 1 || blocks * A > law.horizon)
    throw SpecError("diagonalBlockLaw: need horizon >= numActions * blocks");
  FiniteBanditSpec out;
  out.horizon = blocks;
  out.numActions = A;
  for (const auto& o : law.outcomes) {
    if (o.prob <= 0.0) continue;
    Eigen::MatrixXd tensor(blocks, A);
    for (int n = 0; n < blocks; ++n)
      for (int a = 0; a < A; ++a) tensor(n, a) = o.tensor(n * A + a, a);
    out.outcomes.push_back({std::move(tensor), o.prob});
  }
  return out.normalized();
}

ClassificationResult isStronglyStationary(const FiniteBanditSpec& law, double tol,
                                          const Budget& budget) {
  law.validate();
  const int A = law.numActions;
  const int K = law.horizon / A;
  if (K < 1)
    throw SpecError("isStronglyStationary: horizon shorter than one |A|-block");

  ClassificationResult stationary = isStationary(law, tol, budget);
  if (!stationary.verdict) {
    stationary.verdict = false;
    stationary.scope += "; input not stationary, so not strongly stationary";
    return stationary;
  }

  ClassificationResult result;
  result.scope = scopeNote(law.horizon) + "; blocks checked: K=" + std::to_string(K);

  const FiniteBanditSpec rows = law.truncated(K);
  const FiniteBanditSpec blocks = diagonalBlockLaw(law, K);

  std::map<std::vector<double>, double> rowLaw, blockLaw;
  for (const auto& o : rows.outcomes) {
    std::vector<double> key(o.tensor.data(), o.tensor.data() + o.tensor.size());
    rowLaw[std::move(key)] += o.prob;
  }
  for (const auto& o : blocks.outcomes) {
    std::vector<double> key(o.tensor.data(), o.tensor.data() + o.tensor.size());
    blockLaw[std::move(key)] += o.prob;
  }
  const double tv = tvDistance(rowLaw, blockLaw);
  if (tv > tol) {
    result.verdict = false;
    ClassWitness w;
    w.tvDistance = tv;
    w.description = "law of the first " + std::to_string(K) +
                    " reward rows differs from the diagonal block law";
    result.witness = std::move(w);
    return result;
  }
  result.verdict = true;
  return result;
}

FiniteBanditSpec makeStronglyStationarySurrogate(const FiniteBanditSpec& law, int blocks,
                                                 double tol, const Budget& budget) {
  law.validate();
  const int A = law.numActions;
  const int K = blocks > 0 ? blocks : law.horizon / A;
  if (K < 1 || K * A > law.horizon)
    throw SpecError("makeStronglyStationarySurrogate: need horizon >= numActions * blocks");

  const ClassificationResult stationary = isStationary(law, tol, budget);
  if (!stationary.verdict)
    throw ContractViolation(
        "makeStronglyStationarySurrogate: input is not stationary (" +
        (stationary.witness ? stationary.witness->description : std::string("")) + ")");

  return diagonalBlockLaw(law, K);
}

namespace {

// Mixture over latent components of row-independent binary laws. Component c
// gives row t the per-action means in means[c][t]; a coupled row realizes
// every coordinate from one shared uniform (comonotone), an uncoupled row
// uses independent coordinates. Either way the per-coordinate marginals are
// the component means, so recoupling rows never changes a reward-path law.
FiniteBanditSpec mixtureRowLaw(int numActions, int horizon,
                               const std::vector<double>& weights,
                               const std::vector<std::vector<Eigen::VectorXd>>& means,
                               const std::vector<std::vector<bool>>& coupled) {
  const int A = numActions, T = horizon;
  std::map<std::vector<double>, double> acc;
  for (size_t c = 0; c < weights.size(); ++c) {
    std::vector<std::vector<double>> rowLaw(T, std::vector<double>(1 << A, 0.0));
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd& mu = means[c][t];
      for (int x = 0; x < (1 << A); ++x) {
        if (coupled[c][t]) {
          double lo = 0.0, hi = 1.0;
          for (int a = 0; a < A; ++a) {
            if ((x >> a) & 1)
              hi = std::min(hi, mu[a]);
            else
              lo = std::max(lo, mu[a]);
          }
          rowLaw[t][x] = std::max(0.0, hi - lo);
        } else {
          double p = 1.0;
          for (int a = 0; a < A; ++a) p *= ((x >> a) & 1) ? mu[a] : 1.0 - mu[a];
          rowLaw[t][x] = p;
        }
      }
    }
    std::vector<int> rowIdx(T, 0);
    while (true) {
      double p = weights[c];
      for (int t = 0; t < T; ++t) p *= rowLaw[t][rowIdx[t]];
      if (p > 0.0) {
        std::vector<double> key(T * A);
        for (int t = 0; t < T; ++t)
          for (int a = 0; a < A; ++a) key[t * A + a] = double((rowIdx[t] >> a) & 1);
        acc[std::move(key)] += p;
      }
      int t = 0;
      while (t < T && ++rowIdx[t] == (1 << A)) rowIdx[t++] = 0;
      if (t == T) break;
    }
  }
  FiniteBanditSpec law;
  law.horizon = T;
  law.numActions = A;
  for (const auto& [key, p] : acc) {
    Eigen::MatrixXd tensor(T, A);
    for (int t = 0; t < T; ++t)
      for (int a = 0; a < A; ++a) tensor(t, a) = key[t * A + a];
    law.outcomes.push_back({std::move(tensor), p});
  }
  return law;
}

std::map<std::vector<double>, double> fullLaw(const FiniteBanditSpec& law) {
  std::map<std::vector<double>, double> out;
  for (const auto& o : law.outcomes) {
    std::vector<double> key(o.tensor.data(), o.tensor.data() + o.tensor.size());
    out[std::move(key)] += o.prob;
  }
  return out;
}

}  // namespace

HarnessReport theoremHarness(TheoremKind kind, std::uint64_t seed, int numTrials) {
  HarnessReport report;
  report.trials = numTrials;
  RngStream rng(seed);
  const double tol = 1e-9;

  for (int trial = 0; trial < numTrials; ++trial) {
    RngStream r = rng.child(static_cast<std::uint64_t>(trial));
    const int A = 1 + static_cast<int>(r.nextU64() % 2);
    const int T = 2 + static_cast<int>(r.nextU64() % 3);  // 2..4
    const int comps = 1 + static_cast<int>(r.nextU64() % 2);

    std::vector<double> weights(comps);
    double wsum = 0.0;
    for (double& w : weights) wsum += (w = 0.1 + r.nextDouble());
    for (double& w : weights) w /= wsum;

    if (kind == TheoremKind::Thm3) {
      // Means constant over time in half the trials so both stationary and
      // non-stationary verdicts occur.
      const bool constantMeans = (trial % 2 == 0);
      std::vector<std::vector<Eigen::VectorXd>> means(comps,
                                                      std::vector<Eigen::VectorXd>(T));
      for (int c = 0; c < comps; ++c) {
        Eigen::VectorXd base(A);
        for (int a = 0; a < A; ++a) base[a] = 0.05 + 0.9 * r.nextDouble();
        for (int t = 0; t < T; ++t) {
          if (constantMeans || t == 0)
            means[c][t] = base;
          else {
            means[c][t].resize(A);
            for (int a = 0; a < A; ++a) means[c][t][a] = 0.05 + 0.9 * r.nextDouble();
          }
        }
      }
      std::vector<std::vector<bool>> uncoupled(comps, std::vector<bool>(T, false));
      std::vector<std::vector<bool>> reshuffled(comps, std::vector<bool>(T, false));
      for (int c = 0; c < comps; ++c)
        for (int t = 0; t < T; ++t) reshuffled[c][t] = (r.nextU64() % 2) == 1;

      const FiniteBanditSpec lawA = mixtureRowLaw(A, T, weights, means, uncoupled);
      const FiniteBanditSpec lawB = mixtureRowLaw(A, T, weights, means, reshuffled);

      const ClassificationResult equiv = areEquivalent(lawA, lawB, tol);
      const ClassificationResult sa = isStationary(lawA, tol);
      const ClassificationResult sb = isStationary(lawB, tol);
      if (!equiv.verdict) {
        ++report.violations;
        report.notes.push_back("trial " + std::to_string(trial) +
                               ": recoupled pair not equivalent");
      } else if (sa.verdict != sb.verdict) {
        ++report.violations;
        report.notes.push_back("trial " + std::to_string(trial) +
                               ": equivalent pair got different stationarity verdicts");
      }
    } else {
      // Strongly stationary generator: rows i.i.d. given the component, with
      // independent coordinates.
      auto randomStrong = [&](RngStream& s) {
        std::vector<std::vector<Eigen::VectorXd>> means(comps,
                                                        std::vector<Eigen::VectorXd>(T));
        for (int c = 0; c < comps; ++c) {
          Eigen::VectorXd base(A);
          for (int a = 0; a < A; ++a) base[a] = 0.05 + 0.9 * s.nextDouble();
          for (int t = 0; t < T; ++t) means[c][t] = base;
        }
        std::vector<std::vector<bool>> uncoupled(comps, std::vector<bool>(T, false));
        return mixtureRowLaw(A, T, weights, means, uncoupled);
      };

      const FiniteBanditSpec lawA = randomStrong(r);
      FiniteBanditSpec lawB;
      const int pairKind = trial % 3;
      if (pairKind == 0) {
        lawB = lawA;  // identical specs
      } else if (pairKind == 1) {
        // Same law assembled through duplicated outcomes.
        lawB = lawA;
        if (!lawB.outcomes.empty()) {
          auto first = lawB.outcomes.front();
          lawB.outcomes.front().prob *= 0.5;
          first.prob *= 0.5;
          lawB.outcomes.push_back(first);
        }
        lawB = lawB.normalized();
      } else {
        RngStream other = r.child(99);
        lawB = randomStrong(other);
      }

      const int K = T / A;
      if (!isStronglyStationary(lawA, tol).verdict ||
          !isStronglyStationary(lawB, tol).verdict) {
        ++report.violations;
        report.notes.push_back("trial " + std::to_string(trial) +
                               ": generator produced a non-strongly-stationary law");
        continue;
      }
      const bool equalFull = tvDistance(fullLaw(lawA), fullLaw(lawB)) <= tol;
      const bool equiv = areEquivalent(lawA, lawB, tol).verdict;
      const bool equalRows =
          tvDistance(fullLaw(lawA.truncated(K)), fullLaw(lawB.truncated(K))) <= tol;
      if (equalFull && !equiv) {
        ++report.violations;
        report.notes.push_back("trial " + std::to_string(trial) +
                               ": equal laws but not equivalent");
      }
      if (equiv && !equalRows) {
        ++report.violations;
        report.notes.push_back("trial " + std::to_string(trial) +
                               ": equivalent strongly stationary pair with different row laws");
      }
    }
  }
  report.pass = report.violations == 0;
  return report;
}

}  // namespace banditlab
