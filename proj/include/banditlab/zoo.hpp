#pragma once

#include <memory>
#include <vector>

#include "banditlab/bandit.hpp"
#include "banditlab/types.hpp"

namespace banditlab {

// Bernoulli bandit whose per-action mean is independently redrawn from its
// prior with probability q_a at each step and held otherwise. The optional
// `initial` distributions override where the chain starts; by default it
// starts from the prior, which makes the latent chain strictly stationary.
struct ModulatedBernoulliSpec {
  int numActions = 0;
  std::vector<FiniteDist> prior;       // Q_a, support within [0, 1]
  std::vector<double> redrawProb;      // q_a in [0, 1]
  std::vector<FiniteDist> initial;     // empty => start from prior

  void validate() const;
  const FiniteDist& initialDist(ActionId a) const {
    return initial.empty() ? prior[a] : initial[a];
  }
  bool stationaryStart() const { return initial.empty(); }
  bool homogeneousRedraw() const;
  // The shared redraw probability; throws unless homogeneous.
  double redrawBar() const;

  // All actions share the same prior and redraw probability.
  static ModulatedBernoulliSpec symmetric(int numActions, const FiniteDist& q, double qbar);
};

// Rewards i.i.d. over time per action: the q = 1 modulated bandit.
struct IidBernoulliSpec {
  int numActions = 0;
  std::vector<FiniteDist> prior;

  void validate() const;
  ModulatedBernoulliSpec asModulated() const;
};

enum class NoiseMode { Independent, DependentEvenSteps };

// Constant per-episode mean vector theta with Bernoulli rewards
// R_{t,a} = 1{U < theta_a}. Independent mode uses a fresh uniform per (t, a);
// dependent mode reuses the shared action's uniform for every action at even
// timesteps (timesteps counted from 1, so "even" means rows 1, 3, ... here).
struct NoiseCouplingSpec {
  NoiseMode mode = NoiseMode::Independent;
  ActionId sharedAction = 0;
  int numActions = 0;
  std::vector<FiniteDist> meanPrior;

  void validate() const;
};

std::unique_ptr<BanditProcess> makeModulated(const ModulatedBernoulliSpec& spec);
std::unique_ptr<BanditProcess> makeIid(const IidBernoulliSpec& spec);
std::unique_ptr<BanditProcess> makeNoiseCoupled(const NoiseCouplingSpec& spec);

}  // namespace banditlab
