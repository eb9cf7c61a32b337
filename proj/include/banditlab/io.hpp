#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "banditlab/classify.hpp"
#include "banditlab/info.hpp"

namespace banditlab {

// ---- JSONL episode logs -----------------------------------------------

// One episode per line: seed, actions, observed rewards, optional latents.
std::string episodeToJsonLine(const EpisodeLog& log);
void writeEpisodesJsonl(std::ostream& out, const std::vector<EpisodeLog>& logs);

// ---- bandit specs -------------------------------------------------------

using BanditSpecVariant =
    std::variant<ModulatedBernoulliSpec, IidBernoulliSpec, NoiseCouplingSpec>;

// Parses {type, numActions, support, probs, redrawProb, mode, sharedAction,
// initialProbs} with unknown fields rejected. Errors name the offending
// field.
BanditSpecVariant parseBanditSpec(const std::string& jsonText);
std::string banditSpecToJson(const BanditSpecVariant& spec);

FiniteBanditSpec lawOf(const BanditSpecVariant& spec, int horizon, const Budget& budget = {});
std::unique_ptr<BanditProcess> samplerOf(const BanditSpecVariant& spec);

// ---- finite laws --------------------------------------------------------

std::string finiteLawToJson(const FiniteBanditSpec& law);
FiniteBanditSpec parseFiniteLaw(const std::string& jsonText);

// ---- reports ------------------------------------------------------------

std::string regretReportCsv(const RegretReport& report);
std::string regretReportJson(const RegretReport& report);
std::string variationReportJson(const VariationReport& report);
std::string variationReportCsv(const VariationReport& report);
std::string boundReportJson(const BoundReport& report);
std::string boundReportsTable(const std::vector<BoundReport>& reports);
std::string classificationToJson(const ClassificationResult& result);
std::string perStepCsv(const Eigen::VectorXd& values, const std::string& valueName);

// ---- experiment configs ---------------------------------------------------

struct AgentConfig {
  std::string type;  // uniform | constant | filteredGreedy | filteredThompson |
                     // bayesOptimal | slidingWindowGreedy
  int constantAction = 0;
  int window = 1;
  std::uint64_t seedStream = 0;
};

struct ExperimentConfig {
  int schemaVersion = 1;
  std::vector<std::pair<std::string, BanditSpecVariant>> bandits;  // (name, spec)
  std::vector<AgentConfig> agents;
  int horizon = 1;
  int episodes = 0;
  std::uint64_t seed = 0;
  std::vector<OracleProcessKind> chiKinds;
  AlphaSpec alpha = AlphaSpec::identity();
  std::vector<std::string> checks;
  std::vector<double> qbarGrid;
  std::string prop2State = "theta";
  std::string outDir;
};

// Strict parse: unknown fields, bad enum values and invalid probabilities are
// errors naming the field.
ExperimentConfig parseExperimentConfig(const std::string& jsonText);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

// ---- orchestration --------------------------------------------------------

struct RunOutcome {
  int exitCode = 0;                 // 0 iff every requested check passed
  std::vector<std::string> failures;
  std::vector<std::string> artifacts;  // files written
  std::string summary;                 // plain-text table
};

// Executes the checks requested by the config, writing CSV/JSON artifacts
// into outDir. Every artifact carries the config hash and seed.
RunOutcome runExperiment(const ExperimentConfig& config, const std::string& configText,
                         const std::filesystem::path& outDir, const Budget& budget = {},
                         int threads = 0);

// q-bar sweep over the grid: per-q rows of the Bayes-optimal dynamic regret,
// the certified floor, V_T, the filtered-greedy PastRewards regret and the
// temporal variation, with the monotone trend assertions applied.
RunOutcome runSweep(const ExperimentConfig& config, const std::string& configText,
                    const std::filesystem::path& outDir, const Budget& budget = {});

}  // namespace banditlab
