#include "banditlab/zoo.hpp"

#include <cmath>

namespace banditlab {

namespace {

void validatePriorList(const std::vector<FiniteDist>& dists, int numActions, const char* name) {
  if (static_cast<int>(dists.size()) != numActions)
    throw SpecError(std::string(name) + ": expected one distribution per action");
  for (const auto& d : dists) {
    d.validate();
    if (d.support.minCoeff() < 0.0 || d.support.maxCoeff() > 1.0)
      throw SpecError(std::string(name) + ": support must lie within [0, 1]");
  }
}

}  // namespace

void ModulatedBernoulliSpec::validate() const {
  if (numActions < 1) throw SpecError("ModulatedBernoulliSpec: numActions must be >= 1");
  validatePriorList(prior, numActions, "ModulatedBernoulliSpec.prior");
  if (static_cast<int>(redrawProb.size()) != numActions)
    throw SpecError("ModulatedBernoulliSpec: expected one redraw probability per action");
  for (double q : redrawProb)
    if (q < 0.0 || q > 1.0) throw SpecError("ModulatedBernoulliSpec: redrawProb outside [0, 1]");
  if (!initial.empty()) validatePriorList(initial, numActions, "ModulatedBernoulliSpec.initial");
  if (!initial.empty()) {
    for (int a = 0; a < numActions; ++a)
      if (initial[a].support.size() != prior[a].support.size() ||
          initial[a].support != prior[a].support)
        throw SpecError("ModulatedBernoulliSpec: initial must share the prior's support");
  }
}

bool ModulatedBernoulliSpec::homogeneousRedraw() const {
  for (double q : redrawProb)
    if (q != redrawProb[0]) return false;
  return true;
}

double ModulatedBernoulliSpec::redrawBar() const {
  if (!homogeneousRedraw())
    throw SpecError("heterogeneous redraw probabilities; a single q-bar is undefined");
  return redrawProb[0];
}

ModulatedBernoulliSpec ModulatedBernoulliSpec::symmetric(int numActions, const FiniteDist& q,
                                                         double qbar) {
  ModulatedBernoulliSpec spec;
  spec.numActions = numActions;
  spec.prior.assign(numActions, q);
  spec.redrawProb.assign(numActions, qbar);
  spec.validate();
  return spec;
}

void IidBernoulliSpec::validate() const {
  if (numActions < 1) throw SpecError("IidBernoulliSpec: numActions must be >= 1");
  validatePriorList(prior, numActions, "IidBernoulliSpec.prior");
}

ModulatedBernoulliSpec IidBernoulliSpec::asModulated() const {
  validate();
  ModulatedBernoulliSpec spec;
  spec.numActions = numActions;
  spec.prior = prior;
  spec.redrawProb.assign(numActions, 1.0);
  return spec;
}

void NoiseCouplingSpec::validate() const {
  if (numActions < 1) throw SpecError("NoiseCouplingSpec: numActions must be >= 1");
  validatePriorList(meanPrior, numActions, "NoiseCouplingSpec.meanPrior");
  if (sharedAction < 0 || sharedAction >= numActions)
    throw SpecError("NoiseCouplingSpec: sharedAction out of range");
}

namespace {

class ModulatedBandit final : public BanditProcess {
 public:
  explicit ModulatedBandit(ModulatedBernoulliSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }

  int numActions() const override { return spec_.numActions; }

  EpisodeDraw sampleEpisode(int horizon, RngStream stream) const override {
    EpisodeDraw draw;
    draw.rewards.resize(horizon, spec_.numActions);
    draw.latents.emplace(horizon, spec_.numActions);

    RngStream latentRoot = stream.child(0);
    RngStream rewardRoot = stream.child(1);

    for (ActionId a = 0; a < spec_.numActions; ++a) {
      RngStream latentStream = latentRoot.child(a);
      RngStream rewardStream = rewardRoot.child(a);
      const FiniteDist& q = spec_.prior[a];
      double theta = spec_.initialDist(a).support[latentStream.nextIndex(spec_.initialDist(a).probs)];
      for (int t = 0; t < horizon; ++t) {
        (*draw.latents)(t, a) = theta;
        draw.rewards(t, a) = rewardStream.nextDouble() < theta ? 1.0 : 0.0;
        if (latentStream.nextDouble() < spec_.redrawProb[a])
          theta = q.support[latentStream.nextIndex(q.probs)];
      }
    }
    return draw;
  }

 private:
  ModulatedBernoulliSpec spec_;
};

class NoiseCoupledBandit final : public BanditProcess {
 public:
  explicit NoiseCoupledBandit(NoiseCouplingSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }

  int numActions() const override { return spec_.numActions; }

  EpisodeDraw sampleEpisode(int horizon, RngStream stream) const override {
    EpisodeDraw draw;
    draw.rewards.resize(horizon, spec_.numActions);
    draw.latents.emplace(horizon, spec_.numActions);

    RngStream thetaStream = stream.child(0);
    RngStream noiseRoot = stream.child(1);

    Eigen::VectorXd theta(spec_.numActions);
    for (ActionId a = 0; a < spec_.numActions; ++a)
      theta[a] = spec_.meanPrior[a].support[thetaStream.nextIndex(spec_.meanPrior[a].probs)];

    for (int t = 0; t < horizon; ++t) {
      draw.latents->row(t) = theta;
      RngStream rowStream = noiseRoot.child(static_cast<std::uint64_t>(t));
      // Row t is paper timestep t+1; shared noise applies at even timesteps.
      const bool shared =
          spec_.mode == NoiseMode::DependentEvenSteps && ((t + 1) % 2 == 0);
      if (shared) {
        const double u = rowStream.child(spec_.sharedAction).nextDouble();
        for (ActionId a = 0; a < spec_.numActions; ++a)
          draw.rewards(t, a) = u < theta[a] ? 1.0 : 0.0;
      } else {
        for (ActionId a = 0; a < spec_.numActions; ++a)
          draw.rewards(t, a) = rowStream.child(a).nextDouble() < theta[a] ? 1.0 : 0.0;
      }
    }
    return draw;
  }

 private:
  NoiseCouplingSpec spec_;
};

}  // namespace

std::unique_ptr<BanditProcess> makeModulated(const ModulatedBernoulliSpec& spec) {
  return std::make_unique<ModulatedBandit>(spec);
}

std::unique_ptr<BanditProcess> makeIid(const IidBernoulliSpec& spec) {
  return std::make_unique<ModulatedBandit>(spec.asModulated());
}

std::unique_ptr<BanditProcess> makeNoiseCoupled(const NoiseCouplingSpec& spec) {
  return std::make_unique<NoiseCoupledBandit>(spec);
}

}  // namespace banditlab
