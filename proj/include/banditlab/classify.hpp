#pragma once

#include <map>
#include <optional>
#include <string>

#include "banditlab/finite_law.hpp"

namespace banditlab {

// Counterexample attached to a negative classification verdict. Timesteps
// are reported 1-based. For distribution-equality checks the witness names
// the action sequence and the two timestep selections whose reward laws
// differ; for exchangeability it names the permutation.
struct ClassWitness {
  std::vector<ActionId> actions;
  std::vector<int> timestepsA;
  std::vector<int> timestepsB;
  std::vector<int> permutation;
  double tvDistance = 0.0;
  std::string description;
};

struct ClassificationResult {
  bool verdict = false;
  std::optional<ClassWitness> witness;
  // Finite-horizon restriction: a true verdict certifies the checked horizon
  // only. Recorded on every result.
  std::string scope;
};

// Law of the reward path selected by (timesteps, actions): timesteps are
// 0-based row indices here. Exposed for reuse by tests and the surrogate.
std::map<std::vector<double>, double> selectionLaw(const FiniteBanditSpec& law,
                                                   const std::vector<int>& rows,
                                                   const std::vector<ActionId>& actions);

double tvDistance(const std::map<std::vector<double>, double>& p,
                  const std::map<std::vector<double>, double>& q);

// Stationarity at the law's horizon: every reward subsequence selected along
// an action sequence and distinct timesteps must match the law of the same
// selection along the leading timesteps (1..k), for every length k. Searches
// k in increasing order so a negative verdict carries a minimal witness.
ClassificationResult isStationary(const FiniteBanditSpec& law, double tol = 1e-9,
                                  const Budget& budget = {});

// Permutation invariance of the reward-row sequence. All permutations are
// enumerated up to 8 timesteps (transpositions first, so witnesses are
// transpositions whenever one suffices); beyond that a seeded sample of
// permutations is checked and the sampling is noted in the scope.
ClassificationResult isExchangeable(const FiniteBanditSpec& law, double tol = 1e-9,
                                    const Budget& budget = {}, std::uint64_t sampleSeed = 7,
                                    int sampleCount = 5000);

// Equivalence in the indistinguishable-experience sense, decided through the
// per-action-sequence reward-path laws (which settles the all-policy
// quantifier without enumerating policies).
ClassificationResult areEquivalent(const FiniteBanditSpec& lawA, const FiniteBanditSpec& lawB,
                                   double tol = 1e-9, const Budget& budget = {});

// A stationary law is strongly stationary when its first K reward rows and
// its K diagonal |A|-tuple blocks (R_{n|A|+1, 1}, ..., R_{n|A|+|A|, |A|}),
// n = 0..K-1, are equal in distribution, K = floor(T / |A|). A non-stationary
// input is reported false with the stationarity witness attached.
ClassificationResult isStronglyStationary(const FiniteBanditSpec& law, double tol = 1e-9,
                                          const Budget& budget = {});

// Pushforward of the law onto its K diagonal blocks: a bandit law with
// horizon K whose row n is (R_{n|A|+1, 1}, ..., R_{n|A|+|A|, |A|}).
FiniteBanditSpec diagonalBlockLaw(const FiniteBanditSpec& law, int blocks);

// Strongly stationary representative of a stationary law's equivalence
// class: the bandit whose first K reward rows carry the exact law of the
// input's K diagonal blocks (the finite-horizon stand-in for the
// exchangeable construction). Throws ContractViolation with the witness
// description when the input is not stationary.
FiniteBanditSpec makeStronglyStationarySurrogate(const FiniteBanditSpec& law, int blocks = -1,
                                                 double tol = 1e-9, const Budget& budget = {});

enum class TheoremKind { Thm3, Thm5 };

struct HarnessReport {
  int trials = 0;
  int violations = 0;
  bool pass = false;
  std::vector<std::string> notes;
};

// Randomized property harness over small specs (T <= 4, |A| <= 2, binary
// rewards).
//   Thm3: pairs built by reshuffling within-row noise couplings (preserving
//         every per-action-sequence marginal) must get one stationarity
//         verdict.
//   Thm5: over strongly stationary pairs, equal full laws imply equivalence,
//         and equivalence implies equal laws of the first K rows.
HarnessReport theoremHarness(TheoremKind kind, std::uint64_t seed, int numTrials);

}  // namespace banditlab
