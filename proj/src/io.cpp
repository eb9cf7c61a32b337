#include "banditlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace banditlab {

using nlohmann::json;

namespace {

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

json vectorToJson(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int t = 0; t < m.rows(); ++t) {
    json row = json::array();
    for (int a = 0; a < m.cols(); ++a) row.push_back(m(t, a));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void fieldError(const std::string& context, const std::string& field,
                             const std::string& what) {
  throw SpecError(context + ": field '" + field + "' " + what);
}

void rejectUnknown(const json& obj, const std::vector<std::string>& allowed,
                   const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) fieldError(context, it.key(), "is not recognized");
  }
}

const json& require(const json& obj, const std::string& field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end()) fieldError(context, field, "is required");
  return *it;
}

std::vector<FiniteDist> parseDistList(const json& supportJ, const json& probsJ, int numActions,
                                      const std::string& context) {
  if (!supportJ.is_array() || static_cast<int>(supportJ.size()) != numActions)
    fieldError(context, "support", "must be a list with one entry per action");
  if (!probsJ.is_array() || static_cast<int>(probsJ.size()) != numActions)
    fieldError(context, "probs", "must be a list with one entry per action");
  std::vector<FiniteDist> dists;
  for (int a = 0; a < numActions; ++a) {
    std::vector<double> s = supportJ[a].get<std::vector<double>>();
    std::vector<double> p = probsJ[a].get<std::vector<double>>();
    if (s.size() != p.size())
      fieldError(context, "probs", "entry " + std::to_string(a) + " does not match support");
    FiniteDist d(Eigen::Map<Eigen::VectorXd>(s.data(), s.size()),
                 Eigen::Map<Eigen::VectorXd>(p.data(), p.size()));
    try {
      d.validate();
    } catch (const SpecError& e) {
      fieldError(context, "probs", "entry " + std::to_string(a) + " invalid: " + e.what());
    }
    dists.push_back(std::move(d));
  }
  return dists;
}

}  // namespace

std::string episodeToJsonLine(const EpisodeLog& log) {
  json j;
  j["seed"] = log.seed;
  json actions = json::array(), rewards = json::array();
  for (const auto& step : log.history) {
    actions.push_back(step.action);
    rewards.push_back(step.reward);
  }
  j["actions"] = std::move(actions);
  j["rewards"] = std::move(rewards);
  if (log.latents) j["latents"] = matrixToJson(*log.latents);
  return j.dump();
}

void writeEpisodesJsonl(std::ostream& out, const std::vector<EpisodeLog>& logs) {
  for (const auto& log : logs) out << episodeToJsonLine(log) << '\n';
}

BanditSpecVariant parseBanditSpec(const std::string& jsonText) {
  const json j = json::parse(jsonText);
  const std::string context = "bandit spec";
  const std::string type = require(j, "type", context).get<std::string>();
  const int numActions = require(j, "numActions", context).get<int>();

  if (type == "modulated") {
    rejectUnknown(j, {"type", "numActions", "support", "probs", "redrawProb", "initialProbs"},
                  context);
    ModulatedBernoulliSpec spec;
    spec.numActions = numActions;
    spec.prior = parseDistList(require(j, "support", context), require(j, "probs", context),
                               numActions, context);
    spec.redrawProb = require(j, "redrawProb", context).get<std::vector<double>>();
    if (j.contains("initialProbs")) {
      const json& initJ = j["initialProbs"];
      if (!initJ.is_array() || static_cast<int>(initJ.size()) != numActions)
        fieldError(context, "initialProbs", "must be a list with one entry per action");
      for (int a = 0; a < numActions; ++a) {
        std::vector<double> p = initJ[a].get<std::vector<double>>();
        if (static_cast<int>(p.size()) != spec.prior[a].size())
          fieldError(context, "initialProbs", "entry " + std::to_string(a) +
                                                  " does not match the prior support");
        spec.initial.push_back(
            FiniteDist(spec.prior[a].support, Eigen::Map<Eigen::VectorXd>(p.data(), p.size())));
      }
    }
    try {
      spec.validate();
    } catch (const SpecError& e) {
      fieldError(context, "redrawProb", std::string("invalid: ") + e.what());
    }
    return spec;
  }
  if (type == "iid") {
    rejectUnknown(j, {"type", "numActions", "support", "probs"}, context);
    IidBernoulliSpec spec;
    spec.numActions = numActions;
    spec.prior = parseDistList(require(j, "support", context), require(j, "probs", context),
                               numActions, context);
    spec.validate();
    return spec;
  }
  if (type == "noiseCoupled") {
    rejectUnknown(j, {"type", "numActions", "support", "probs", "mode", "sharedAction"}, context);
    NoiseCouplingSpec spec;
    spec.numActions = numActions;
    spec.meanPrior = parseDistList(require(j, "support", context), require(j, "probs", context),
                                   numActions, context);
    const std::string mode = require(j, "mode", context).get<std::string>();
    if (mode == "independent")
      spec.mode = NoiseMode::Independent;
    else if (mode == "dependentEvenSteps")
      spec.mode = NoiseMode::DependentEvenSteps;
    else
      fieldError(context, "mode", "must be 'independent' or 'dependentEvenSteps'");
    spec.sharedAction = require(j, "sharedAction", context).get<int>();
    spec.validate();
    return spec;
  }
  fieldError(context, "type", "must be 'modulated', 'iid' or 'noiseCoupled'");
}

namespace {

json distListToJson(const std::vector<FiniteDist>& dists, bool supports) {
  json arr = json::array();
  for (const auto& d : dists) arr.push_back(vectorToJson(supports ? d.support : d.probs));
  return arr;
}

}  // namespace

std::string banditSpecToJson(const BanditSpecVariant& spec) {
  json j;
  if (const auto* m = std::get_if<ModulatedBernoulliSpec>(&spec)) {
    j["type"] = "modulated";
    j["numActions"] = m->numActions;
    j["support"] = distListToJson(m->prior, true);
    j["probs"] = distListToJson(m->prior, false);
    j["redrawProb"] = m->redrawProb;
    if (!m->initial.empty()) j["initialProbs"] = distListToJson(m->initial, false);
  } else if (const auto* i = std::get_if<IidBernoulliSpec>(&spec)) {
    j["type"] = "iid";
    j["numActions"] = i->numActions;
    j["support"] = distListToJson(i->prior, true);
    j["probs"] = distListToJson(i->prior, false);
  } else {
    const auto& n = std::get<NoiseCouplingSpec>(spec);
    j["type"] = "noiseCoupled";
    j["numActions"] = n.numActions;
    j["support"] = distListToJson(n.meanPrior, true);
    j["probs"] = distListToJson(n.meanPrior, false);
    j["mode"] = n.mode == NoiseMode::Independent ? "independent" : "dependentEvenSteps";
    j["sharedAction"] = n.sharedAction;
  }
  return j.dump(2);
}

FiniteBanditSpec lawOf(const BanditSpecVariant& spec, int horizon, const Budget& budget) {
  return std::visit([&](const auto& s) { return exactLaw(s, horizon, budget); }, spec);
}

std::unique_ptr<BanditProcess> samplerOf(const BanditSpecVariant& spec) {
  if (const auto* m = std::get_if<ModulatedBernoulliSpec>(&spec)) return makeModulated(*m);
  if (const auto* i = std::get_if<IidBernoulliSpec>(&spec)) return makeIid(*i);
  return makeNoiseCoupled(std::get<NoiseCouplingSpec>(spec));
}

std::string finiteLawToJson(const FiniteBanditSpec& law) {
  json j;
  j["horizon"] = law.horizon;
  j["numActions"] = law.numActions;
  json outcomes = json::array();
  for (const auto& o : law.outcomes) {
    json entry;
    entry["tensor"] = matrixToJson(o.tensor);
    entry["prob"] = o.prob;
    outcomes.push_back(std::move(entry));
  }
  j["outcomes"] = std::move(outcomes);
  return j.dump();
}

FiniteBanditSpec parseFiniteLaw(const std::string& jsonText) {
  const json j = json::parse(jsonText);
  const std::string context = "finite law";
  rejectUnknown(j, {"horizon", "numActions", "outcomes"}, context);
  FiniteBanditSpec law;
  law.horizon = require(j, "horizon", context).get<int>();
  law.numActions = require(j, "numActions", context).get<int>();
  const json& outcomes = require(j, "outcomes", context);
  if (!outcomes.is_array()) fieldError(context, "outcomes", "must be an array");
  for (const auto& entry : outcomes) {
    rejectUnknown(entry, {"tensor", "prob"}, context);
    const json& tensorJ = require(entry, "tensor", context);
    Eigen::MatrixXd tensor(law.horizon, law.numActions);
    if (static_cast<int>(tensorJ.size()) != law.horizon)
      fieldError(context, "tensor", "must have one row per timestep");
    for (int t = 0; t < law.horizon; ++t) {
      std::vector<double> row = tensorJ[t].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != law.numActions)
        fieldError(context, "tensor", "row " + std::to_string(t) + " has the wrong width");
      for (int a = 0; a < law.numActions; ++a) tensor(t, a) = row[a];
    }
    law.outcomes.push_back({std::move(tensor), require(entry, "prob", context).get<double>()});
  }
  try {
    law.validate();
  } catch (const SpecError& e) {
    fieldError(context, "outcomes", std::string("invalid: ") + e.what());
  }
  return law;
}

std::string regretReportCsv(const RegretReport& report) {
  std::ostringstream out;
  out << "t,perStep,cumulative";
  if (!report.exact) out << ",stderr";
  out << '\n';
  for (int t = 0; t < report.perStep.size(); ++t) {
    out << t << ',' << fmt(report.perStep[t]) << ',' << fmt(report.cumulative[t]);
    if (!report.exact) out << ',' << fmt(report.stderrPerStep[t]);
    out << '\n';
  }
  return out.str();
}

std::string regretReportJson(const RegretReport& report) {
  json j;
  j["chiKind"] = toString(report.chiKind);
  j["mode"] = report.exact ? "exact" : "monteCarlo";
  if (!report.exact) j["numEpisodes"] = report.numEpisodes;
  j["total"] = report.total();
  j["perStep"] = vectorToJson(report.perStep);
  j["cumulative"] = vectorToJson(report.cumulative);
  if (!report.exact) j["stderrPerStep"] = vectorToJson(report.stderrPerStep);
  return j.dump(2);
}

std::string variationReportJson(const VariationReport& report) {
  json j;
  j["temporalVariation"] = report.temporalVariation;
  j["variationCount"] = report.variationCount;
  j["horizon"] = report.horizon;
  return j.dump(2);
}

std::string variationReportCsv(const VariationReport& report) {
  // Stationary chains contribute equally per step; rows carry the
  // cumulative metrics up to each timestep.
  std::ostringstream out;
  out << "t,temporalVariation,variationCount\n";
  const int steps = report.horizon - 1;
  for (int t = 1; t <= report.horizon; ++t) {
    const double frac = steps > 0 ? double(std::min(t, steps + 1) - 1) / double(steps) : 0.0;
    out << t << ',' << fmt(report.temporalVariation * frac) << ','
        << fmt(report.variationCount * frac) << '\n';
  }
  return out.str();
}

std::string boundReportJson(const BoundReport& report) {
  json j;
  j["name"] = report.name;
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["slack"] = report.slack;
  j["pass"] = report.pass;
  j["trivialInfinite"] = report.trivialInfinite;
  j["note"] = report.note;
  return j.dump(2);
}

std::string boundReportsTable(const std::vector<BoundReport>& reports) {
  std::ostringstream out;
  out << "name        lhs                 rhs                 slack               pass\n";
  for (const auto& r : reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-11s %-19.12g %-19.12g %-19.12g %s%s\n", r.name.c_str(),
                  r.lhs, r.rhs, r.slack, r.pass ? "PASS" : "FAIL",
                  r.trivialInfinite ? " (infinite ratio)" : "");
    out << line;
  }
  return out.str();
}

std::string classificationToJson(const ClassificationResult& result) {
  json j;
  j["verdict"] = result.verdict;
  j["scope"] = result.scope;
  if (result.witness) {
    json w;
    w["description"] = result.witness->description;
    w["tvDistance"] = result.witness->tvDistance;
    if (!result.witness->actions.empty()) w["actions"] = result.witness->actions;
    if (!result.witness->timestepsA.empty()) w["timestepsA"] = result.witness->timestepsA;
    if (!result.witness->timestepsB.empty()) w["timestepsB"] = result.witness->timestepsB;
    if (!result.witness->permutation.empty()) w["permutation"] = result.witness->permutation;
    j["witness"] = std::move(w);
  }
  return j.dump(2);
}

std::string perStepCsv(const Eigen::VectorXd& values, const std::string& valueName) {
  std::ostringstream out;
  out << "t," << valueName << '\n';
  for (int t = 0; t < values.size(); ++t) out << t << ',' << fmt(values[t]) << '\n';
  return out.str();
}

namespace {

OracleProcessKind parseChiKind(const std::string& name, const std::string& context) {
  if (name == "DynamicTheta") return OracleProcessKind::DynamicTheta;
  if (name == "PastRewards") return OracleProcessKind::PastRewards;
  if (name == "InvariantLaw") return OracleProcessKind::InvariantLaw;
  if (name == "OptimalHistory") return OracleProcessKind::OptimalHistory;
  fieldError(context, "chiKinds", "contains unknown oracle kind '" + name + "'");
}

const std::vector<std::string> kKnownChecks = {"thm1",  "cor1-sweep", "prop1",    "thm2",
                                               "prop2", "variation",  "classify", "equivalence"};

}  // namespace

ExperimentConfig parseExperimentConfig(const std::string& jsonText) {
  const json j = json::parse(jsonText);
  const std::string context = "experiment config";
  rejectUnknown(j,
                {"schemaVersion", "bandits", "agents", "horizon", "episodes", "seed", "chiKinds",
                 "alpha", "checks", "qbarGrid", "prop2State", "outDir"},
                context);

  ExperimentConfig config;
  config.schemaVersion = require(j, "schemaVersion", context).get<int>();
  if (config.schemaVersion != 1)
    fieldError(context, "schemaVersion", "must be 1");

  const json& bandits = require(j, "bandits", context);
  if (!bandits.is_array() || bandits.empty())
    fieldError(context, "bandits", "must be a non-empty array");
  for (const auto& entry : bandits) {
    rejectUnknown(entry, {"name", "spec"}, context);
    const std::string name = require(entry, "name", context).get<std::string>();
    config.bandits.emplace_back(name, parseBanditSpec(require(entry, "spec", context).dump()));
  }

  const json& agents = require(j, "agents", context);
  if (!agents.is_array()) fieldError(context, "agents", "must be an array");
  for (const auto& entry : agents) {
    rejectUnknown(entry, {"type", "params", "seedStream"}, context);
    AgentConfig agent;
    agent.type = require(entry, "type", context).get<std::string>();
    const bool known = agent.type == "uniform" || agent.type == "constant" ||
                       agent.type == "filteredGreedy" || agent.type == "filteredThompson" ||
                       agent.type == "bayesOptimal" || agent.type == "slidingWindowGreedy";
    if (!known) fieldError(context, "agents", "unknown agent type '" + agent.type + "'");
    if (entry.contains("params")) {
      rejectUnknown(entry["params"], {"action", "window"}, context);
      if (entry["params"].contains("action")) agent.constantAction = entry["params"]["action"].get<int>();
      if (entry["params"].contains("window")) agent.window = entry["params"]["window"].get<int>();
    }
    if (entry.contains("seedStream")) agent.seedStream = entry["seedStream"].get<std::uint64_t>();
    config.agents.push_back(std::move(agent));
  }

  config.horizon = require(j, "horizon", context).get<int>();
  if (config.horizon < 1) fieldError(context, "horizon", "must be >= 1");
  if (j.contains("episodes")) config.episodes = j["episodes"].get<int>();
  config.seed = require(j, "seed", context).get<std::uint64_t>();

  if (j.contains("chiKinds"))
    for (const auto& name : j["chiKinds"])
      config.chiKinds.push_back(parseChiKind(name.get<std::string>(), context));
  if (config.chiKinds.empty()) config.chiKinds.push_back(OracleProcessKind::PastRewards);

  if (j.contains("alpha")) {
    rejectUnknown(j["alpha"], {"type", "truncation"}, context);
    const std::string type = require(j["alpha"], "type", context).get<std::string>();
    if (type != "identity") fieldError(context, "alpha", "only 'identity' is supported");
    int truncation = -1;
    if (j["alpha"].contains("truncation")) truncation = j["alpha"]["truncation"].get<int>();
    config.alpha = AlphaSpec::identity(truncation);
  }

  const json& checks = require(j, "checks", context);
  if (!checks.is_array() || checks.empty()) fieldError(context, "checks", "must be a non-empty array");
  for (const auto& c : checks) {
    const std::string name = c.get<std::string>();
    bool known = false;
    for (const auto& k : kKnownChecks) known = known || k == name;
    if (!known) fieldError(context, "checks", "unknown check '" + name + "'");
    config.checks.push_back(name);
  }

  if (j.contains("qbarGrid")) config.qbarGrid = j["qbarGrid"].get<std::vector<double>>();
  if (j.contains("prop2State")) {
    config.prop2State = j["prop2State"].get<std::string>();
    if (config.prop2State != "theta" && config.prop2State != "fullRewards")
      fieldError(context, "prop2State", "must be 'theta' or 'fullRewards'");
  }
  if (j.contains("outDir")) config.outDir = j["outDir"].get<std::string>();
  return config;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

namespace {

struct ArtifactWriter {
  std::filesystem::path dir;
  std::string provenance;  // configHash + seed
  std::vector<std::string>* artifacts;

  void writeJson(const std::string& name, const std::string& payload) const {
    json j = json::parse(payload);
    json wrapped;
    wrapped["configHash"] = provenance.substr(0, 16);
    wrapped["seed"] = provenance.substr(17);
    wrapped["report"] = std::move(j);
    write(name, wrapped.dump(2) + "\n");
  }

  void writeCsv(const std::string& name, const std::string& payload) const {
    write(name, "# configHash=" + provenance.substr(0, 16) + " seed=" + provenance.substr(17) +
                    "\n" + payload);
  }

  void write(const std::string& name, const std::string& bytes) const {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    artifacts->push_back(path.string());
  }
};

std::shared_ptr<Policy> instantiateAgent(const AgentConfig& agent,
                                         const BanditSpecVariant& bandit, int horizon,
                                         const Budget& budget) {
  const auto* modulated = std::get_if<ModulatedBernoulliSpec>(&bandit);
  const auto* iid = std::get_if<IidBernoulliSpec>(&bandit);
  ModulatedBernoulliSpec spec;
  if (modulated)
    spec = *modulated;
  else if (iid)
    spec = iid->asModulated();

  const int numActions = std::visit([](const auto& s) { return s.numActions; }, bandit);
  if (agent.type == "uniform") return uniformPolicy(numActions);
  if (agent.type == "constant") return constantPolicy(agent.constantAction, numActions);
  if (agent.type == "slidingWindowGreedy") return slidingWindowGreedy(numActions, agent.window);
  if (!modulated && !iid)
    throw SpecError("agent '" + agent.type + "' needs a modulated or iid bandit");
  if (agent.type == "filteredGreedy") return filteredGreedy(spec);
  if (agent.type == "filteredThompson") return filteredThompson(spec);
  if (agent.type == "bayesOptimal") return solveBayesOptimal(spec, horizon, budget).policy;
  throw SpecError("unknown agent type '" + agent.type + "'");
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

bool wantsCheck(const ExperimentConfig& config, const std::string& name) {
  for (const auto& c : config.checks)
    if (c == name) return true;
  return false;
}

}  // namespace

RunOutcome runExperiment(const ExperimentConfig& config, const std::string& configText,
                         const std::filesystem::path& outDir, const Budget& budget, int threads) {
  RunOutcome outcome;
  ArtifactWriter writer{outDir, hex64(fnv1a64(configText)) + " " + std::to_string(config.seed),
                        &outcome.artifacts};
  std::vector<BoundReport> allBounds;
  std::ostringstream summary;

  auto recordBound = [&](const std::string& file, const BoundReport& report) {
    writer.writeJson(file, boundReportJson(report));
    allBounds.push_back(report);
    if (!report.pass) outcome.failures.push_back(report.name + " (" + file + ")");
  };

  const int T = config.horizon;
  for (const auto& [name, bandit] : config.bandits) {
    const auto* modulated = std::get_if<ModulatedBernoulliSpec>(&bandit);
    const auto* iid = std::get_if<IidBernoulliSpec>(&bandit);
    ModulatedBernoulliSpec mod;
    if (modulated)
      mod = *modulated;
    else if (iid)
      mod = iid->asModulated();
    const bool filterable = modulated != nullptr || iid != nullptr;

    // Regret artifacts per (agent, chi) plus Monte Carlo runs when requested.
    if (filterable) {
      for (const auto& agent : config.agents) {
        const auto policy = instantiateAgent(agent, bandit, T, budget);
        for (OracleProcessKind chi : config.chiKinds) {
          const std::string base = slug(name) + "__" + slug(agent.type) + "__" + toString(chi);
          const RegretReport exact = regretExact(mod, *policy, T, chi, budget);
          writer.writeCsv("regret_" + base + ".csv", regretReportCsv(exact));
          writer.writeJson("regret_" + base + ".json", regretReportJson(exact));
          if (config.episodes > 0 && (chi == OracleProcessKind::DynamicTheta ||
                                      chi == OracleProcessKind::PastRewards)) {
            const RegretReport mc = regretMonteCarlo(mod, *policy, T, chi, config.episodes,
                                                     config.seed, threads);
            writer.writeCsv("regret_mc_" + base + ".csv", regretReportCsv(mc));
          }
        }
        if (config.episodes > 0) {
          const auto bandit = makeModulated(mod);
          const auto logs = runBatch(*bandit, *policy, T, config.episodes, config.seed, threads);
          std::ostringstream jsonl;
          writeEpisodesJsonl(jsonl, logs);
          writer.write("episodes_" + slug(name) + "__" + slug(agent.type) + ".jsonl",
                       jsonl.str());
        }
      }
    }

    if (wantsCheck(config, "thm1")) {
      if (!filterable) throw SpecError("thm1 check needs a modulated bandit: " + name);
      for (const auto& agent : config.agents) {
        const auto policy = instantiateAgent(agent, bandit, T, budget);
        recordBound("thm1_" + slug(name) + "__" + slug(agent.type) + ".json",
                    thm1Check(mod, *policy, T, budget));
      }
    }
    if (wantsCheck(config, "prop1")) {
      if (!filterable) throw SpecError("prop1 check needs a modulated bandit: " + name);
      recordBound("prop1_" + slug(name) + ".json", prop1Bound(mod, T, config.alpha, budget));
    }
    if (wantsCheck(config, "thm2")) {
      if (!filterable) throw SpecError("thm2 check needs a modulated bandit: " + name);
      for (const auto& agent : config.agents) {
        const auto policy = instantiateAgent(agent, bandit, T, budget);
        for (OracleProcessKind chi : config.chiKinds) {
          const std::string base = slug(name) + "__" + slug(agent.type) + "__" + toString(chi);
          recordBound("thm2_" + base + ".json",
                      thm2Check(mod, *policy, T, chi, config.alpha, budget));
          const InfoRatioReport ratio = infoRatio(mod, *policy, T, chi, config.alpha, budget);
          writer.writeCsv("gamma_" + base + ".csv", perStepCsv(ratio.gamma, "gamma"));
        }
        const double telescope = telescopeInfoSum(mod, *policy, T, config.alpha, budget);
        const double vt = predictiveInfo(mod, config.alpha, T, budget).cumulative;
        BoundReport tele = BoundReport::make("Thm2-tele", telescope, vt);
        tele.note = "sum_t I(alpha-future; A_t, R_{t+1,A_t} | H_t) <= V_T";
        recordBound("thm2_telescope_" + slug(name) + "__" + slug(agent.type) + ".json", tele);
      }
    }
    if (wantsCheck(config, "prop2")) {
      if (!filterable) throw SpecError("prop2 check needs a modulated bandit: " + name);
      const MarkovStateChoice state = config.prop2State == "theta" ? MarkovStateChoice::Theta
                                                                   : MarkovStateChoice::FullRewards;
      recordBound("prop2_" + slug(name) + ".json", prop2Bound(mod, T, config.alpha, state, budget));
    }
    if (wantsCheck(config, "variation")) {
      if (!filterable) throw SpecError("variation check needs a modulated bandit: " + name);
      const VariationReport variation = variationMetrics(mod, T);
      writer.writeJson("variation_" + slug(name) + ".json", variationReportJson(variation));
      writer.writeCsv("variation_" + slug(name) + ".csv", variationReportCsv(variation));
    }
    if (wantsCheck(config, "prop1") || wantsCheck(config, "thm2")) {
      const PredictiveInfoReport info = predictiveInfo(mod, config.alpha, T, budget);
      writer.writeCsv("delta_" + slug(name) + ".csv", perStepCsv(info.perStep, "delta"));
    }
    if (wantsCheck(config, "classify")) {
      const FiniteBanditSpec law = lawOf(bandit, T, budget);
      writer.writeJson("classify_stationary_" + slug(name) + ".json",
                       classificationToJson(isStationary(law, 1e-9, budget)));
      writer.writeJson("classify_exchangeable_" + slug(name) + ".json",
                       classificationToJson(isExchangeable(law, 1e-9, budget)));
      if (law.horizon >= law.numActions)
        writer.writeJson("classify_strongly_stationary_" + slug(name) + ".json",
                         classificationToJson(isStronglyStationary(law, 1e-9, budget)));
    }
  }

  if (wantsCheck(config, "equivalence")) {
    for (size_t i = 0; i < config.bandits.size(); ++i)
      for (size_t k = i + 1; k < config.bandits.size(); ++k) {
        const FiniteBanditSpec a = lawOf(config.bandits[i].second, T, budget);
        const FiniteBanditSpec b = lawOf(config.bandits[k].second, T, budget);
        writer.writeJson("equiv_" + slug(config.bandits[i].first) + "__" +
                             slug(config.bandits[k].first) + ".json",
                         classificationToJson(areEquivalent(a, b, 1e-9, budget)));
      }
  }

  if (wantsCheck(config, "cor1-sweep")) {
    const RunOutcome sweep = runSweep(config, configText, outDir, budget);
    for (const auto& f : sweep.failures) outcome.failures.push_back(f);
    for (const auto& a : sweep.artifacts) outcome.artifacts.push_back(a);
  }

  summary << boundReportsTable(allBounds);
  if (!outcome.failures.empty()) {
    summary << "failed checks:\n";
    for (const auto& f : outcome.failures) summary << "  " << f << '\n';
  }
  outcome.summary = summary.str();
  writer.write("summary.txt", outcome.summary);
  outcome.exitCode = outcome.failures.empty() ? 0 : 1;
  return outcome;
}

RunOutcome runSweep(const ExperimentConfig& config, const std::string& configText,
                    const std::filesystem::path& outDir, const Budget& budget) {
  RunOutcome outcome;
  ArtifactWriter writer{outDir, hex64(fnv1a64(configText)) + " " + std::to_string(config.seed),
                        &outcome.artifacts};
  if (config.qbarGrid.empty()) throw SpecError("sweep: qbarGrid must be non-empty");

  const auto* modulated = std::get_if<ModulatedBernoulliSpec>(&config.bandits.front().second);
  const auto* iid = std::get_if<IidBernoulliSpec>(&config.bandits.front().second);
  if (!modulated && !iid) throw SpecError("sweep: first bandit must be modulated or iid");
  ModulatedBernoulliSpec base = modulated ? *modulated : iid->asModulated();
  const int T = config.horizon;

  std::ostringstream csv;
  csv << "qbar,bayesOptDynamicRegret,floorTimesT,predictiveInfoVT,"
         "pastRewardsRegretGreedy,temporalVariation\n";

  std::vector<double> floors, vts, variations;
  for (double qbar : config.qbarGrid) {
    ModulatedBernoulliSpec spec = base;
    spec.redrawProb.assign(spec.numActions, qbar);

    const BayesOptimalResult opt = solveBayesOptimal(spec, T, budget);
    const double dynRegret =
        regretExact(spec, *opt.policy, T, OracleProcessKind::DynamicTheta, budget).total();
    const double floorT = double(T) * dynamicRegretFloor(spec);
    const double vt = predictiveInfo(spec, config.alpha, T, budget).cumulative;
    const auto greedy = filteredGreedy(spec);
    const double pastRegret =
        regretExact(spec, *greedy, T, OracleProcessKind::PastRewards, budget).total();
    const double variation = variationMetrics(spec, T).temporalVariation;

    floors.push_back(floorT);
    vts.push_back(vt);
    variations.push_back(variation);
    csv << fmt(qbar) << ',' << fmt(dynRegret) << ',' << fmt(floorT) << ',' << fmt(vt) << ','
        << fmt(pastRegret) << ',' << fmt(variation) << '\n';
  }

  // Trend assertions: the floor is monotone along the grid (strictly when the
  // floor constant is positive), V_T is non-increasing, and the temporal
  // variation is non-decreasing.
  ModulatedBernoulliSpec unitSpec = base;
  unitSpec.redrawProb.assign(unitSpec.numActions, 1.0);
  const double floorConstant = dynamicRegretFloor(unitSpec);
  for (size_t i = 1; i < floors.size(); ++i) {
    const bool increasing = config.qbarGrid[i] > config.qbarGrid[i - 1];
    if (floorConstant > 0.0 && increasing && !(floors[i] > floors[i - 1] + 1e-15))
      outcome.failures.push_back("sweep: floor not strictly increasing at row " +
                                 std::to_string(i));
    if (floorConstant == 0.0 && floors[i] + 1e-12 < floors[i - 1])
      outcome.failures.push_back("sweep: floor decreased at row " + std::to_string(i));
    if (vts[i] > vts[i - 1] + 1e-9)
      outcome.failures.push_back("sweep: V_T increased at row " + std::to_string(i));
    if (variations[i] + 1e-12 < variations[i - 1])
      outcome.failures.push_back("sweep: temporal variation decreased at row " +
                                 std::to_string(i));
  }

  writer.writeCsv("sweep.csv", csv.str());
  outcome.summary = csv.str();
  outcome.exitCode = outcome.failures.empty() ? 0 : 1;
  return outcome;
}

}  // namespace banditlab
