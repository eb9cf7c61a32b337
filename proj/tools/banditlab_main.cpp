// Command-line runner: experiment orchestration, q-bar sweeps and
// classification checks over bandit spec / experiment config JSON files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "banditlab/io.hpp"

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw banditlab::SpecError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A spec file is either a generative bandit spec ("type": ...) or an explicit
// finite law ("outcomes": ...).
banditlab::FiniteBanditSpec loadLaw(const std::string& path, int horizon,
                                    const banditlab::Budget& budget) {
  const std::string text = readFile(path);
  if (text.find("\"outcomes\"") != std::string::npos)
    return banditlab::parseFiniteLaw(text);
  return banditlab::lawOf(banditlab::parseBanditSpec(text), horizon, budget);
}

void writeFileWithProvenance(const std::filesystem::path& dir, const std::string& name,
                             const std::string& payload) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  out << payload << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banditlab: simulation and exact verification for non-stationary bandits"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string outDir = "out";
  std::uint64_t seed = 0;
  bool seedSet = false;
  int threads = 0;
  std::int64_t budgetN = 0;
  app.add_option("--out", outDir, "output directory for artifacts");
  app.add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
    seedSet = true;
  });
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  app.add_option("--budget", budgetN, "enumeration budget (outcomes/atoms/nodes)");

  std::string configPath, specAPath, specBPath;
  int horizon = 4;

  auto* runCmd = app.add_subcommand("run", "run the checks requested by an experiment config");
  runCmd->add_option("config", configPath, "experiment config JSON")->required();

  auto* sweepCmd = app.add_subcommand("sweep", "q-bar sweep over the config's grid");
  sweepCmd->add_option("config", configPath, "experiment config JSON")->required();

  auto* classifyCmd = app.add_subcommand("classify", "classify a bandit spec or finite law");
  classifyCmd->add_option("spec", specAPath, "bandit spec or finite-law JSON")->required();
  classifyCmd->add_option("--horizon", horizon, "horizon when expanding a generative spec");

  auto* equivCmd = app.add_subcommand("equiv", "decide equivalence of two bandits");
  equivCmd->add_option("specA", specAPath, "first spec or law")->required();
  equivCmd->add_option("specB", specBPath, "second spec or law")->required();
  equivCmd->add_option("--horizon", horizon, "horizon when expanding generative specs");

  CLI11_PARSE(app, argc, argv);

  banditlab::Budget budget;
  if (budgetN > 0) {
    budget.maxOutcomes = budgetN;
    budget.maxAtoms = budgetN;
    budget.maxTreeNodes = budgetN;
  }

  try {
    if (runCmd->parsed() || sweepCmd->parsed()) {
      const std::string text = readFile(configPath);
      banditlab::ExperimentConfig config = banditlab::parseExperimentConfig(text);
      if (seedSet) config.seed = seed;
      if (!config.outDir.empty() && outDir == "out") outDir = config.outDir;
      const banditlab::RunOutcome outcome =
          runCmd->parsed() ? banditlab::runExperiment(config, text, outDir, budget, threads)
                           : banditlab::runSweep(config, text, outDir, budget);
      std::cout << outcome.summary;
      for (const auto& f : outcome.failures) std::cerr << "FAIL: " << f << '\n';
      return outcome.exitCode;
    }

    if (classifyCmd->parsed()) {
      const banditlab::FiniteBanditSpec law = loadLaw(specAPath, horizon, budget);
      const auto stationary = banditlab::isStationary(law, 1e-9, budget);
      const auto exchangeable = banditlab::isExchangeable(law, 1e-9, budget);
      writeFileWithProvenance(outDir, "stationary.json",
                              banditlab::classificationToJson(stationary));
      writeFileWithProvenance(outDir, "exchangeable.json",
                              banditlab::classificationToJson(exchangeable));
      std::cout << "stationary: " << (stationary.verdict ? "yes" : "no") << '\n'
                << "exchangeable: " << (exchangeable.verdict ? "yes" : "no") << '\n';
      if (law.horizon >= law.numActions) {
        const auto strong = banditlab::isStronglyStationary(law, 1e-9, budget);
        writeFileWithProvenance(outDir, "strongly_stationary.json",
                                banditlab::classificationToJson(strong));
        std::cout << "strongly stationary: " << (strong.verdict ? "yes" : "no") << '\n';
      }
      return 0;
    }

    if (equivCmd->parsed()) {
      const banditlab::FiniteBanditSpec lawA = loadLaw(specAPath, horizon, budget);
      const banditlab::FiniteBanditSpec lawB = loadLaw(specBPath, horizon, budget);
      const auto result = banditlab::areEquivalent(lawA, lawB, 1e-9, budget);
      writeFileWithProvenance(outDir, "equivalent.json",
                              banditlab::classificationToJson(result));
      std::cout << "equivalent: " << (result.verdict ? "yes" : "no") << '\n';
      return result.verdict ? 0 : 1;
    }
  } catch (const banditlab::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << " (required " << e.required << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
