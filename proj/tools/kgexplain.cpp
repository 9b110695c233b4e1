#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgx/enrich.h"
#include "kgx/error.h"
#include "kgx/miner.h"
#include "kgx/reasoner.h"
#include "kgx/transfer.h"
#include "kgx/util.h"
#include "kgx/zsl.h"

namespace fs = std::filesystem;
using namespace kgx;

namespace {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::Parse: return "ParseError";
    case Errc::Usage: return "UsageError";
    case Errc::Io: return "IoError";
    case Errc::NotMaterialized: return "NotMaterialized";
    case Errc::UnboundRole: return "UnboundRole";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::BadInput: return "BadInput";
    case Errc::Infeasible: return "Infeasible";
  }
  return "Error";
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::Parse:
    case Errc::Usage:
    case Errc::Io:
      return 2;
    default:
      return 1;
  }
}

// Values that a flat JSON config file can override; command-line flags win.
struct Settings {
  double thetaPos = 0.6;
  double thetaNeg = -0.6;
  double alpha = 0.05;
  int minSupport = 2;
  int maxDim = 3;
  int beam = 50;
  int jobs = 1;
  int hops = 1;
  int radius = 1;
  int k = 2;
  int featureDim = 8;
  uint64_t seed = 0;
  std::string ambiguous = "skip";
};

void apply_config(const std::string& path, Settings& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Parse, "config " + path + ": " + e.what());
  }
  if (!j.is_object()) fail(Errc::Parse, "config " + path + ": expected a flat JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "theta-pos") s.thetaPos = value.get<double>();
      else if (key == "theta-neg") s.thetaNeg = value.get<double>();
      else if (key == "alpha") s.alpha = value.get<double>();
      else if (key == "min-support") s.minSupport = value.get<int>();
      else if (key == "max-dim") s.maxDim = value.get<int>();
      else if (key == "beam") s.beam = value.get<int>();
      else if (key == "jobs") s.jobs = value.get<int>();
      else if (key == "hops") s.hops = value.get<int>();
      else if (key == "radius") s.radius = value.get<int>();
      else if (key == "k") s.k = value.get<int>();
      else if (key == "feature-dim") s.featureDim = value.get<int>();
      else if (key == "seed") s.seed = value.get<uint64_t>();
      else if (key == "ambiguous") s.ambiguous = value.get<std::string>();
      else std::cerr << "warning: unknown config key '" << key << "'\n";
    } catch (const nlohmann::json::exception&) {
      fail(Errc::Parse, "config " + path + ": bad value for '" + key + "'");
    }
  }
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> out;
  for (const std::string& raw : split(read_file(path), '\n')) {
    std::string line = trim(raw);
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<DomainOntology> load_domain_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(Errc::Io, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".axioms") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<DomainOntology> out;
  for (const fs::path& file : files)
    out.push_back(parse_ontology(file.stem().string(), read_file(file)));
  if (out.empty()) fail(Errc::Usage, "no .axioms files in " + dir.string());
  return out;
}

std::vector<std::string> comma_list(const std::string& s) {
  std::vector<std::string> out;
  for (const std::string& part : split(s, ','))
    if (!trim(part).empty()) out.push_back(trim(part));
  return out;
}

int cmd_synth(const Settings& s, const std::string& outDir, int numDomains, int numTransfers,
              int numPos, int numNeg, double effect, double noiseSigma, double base,
              double mixedFraction, int noiseFacts) {
  ScenarioConfig config;
  config.numDomains = numDomains;
  config.numTransfers = numTransfers;
  config.planted = make_default_planted(numPos, numNeg, effect);
  config.noiseSigma = noiseSigma;
  config.baseScore = base;
  config.mixedPairFraction = mixedFraction;
  config.noiseFacts = noiseFacts;
  SynthScenario scenario = generate_scenario(config, s.seed);
  write_scenario(scenario, outDir);
  std::cout << "wrote scenario with " << scenario.domains.size() << " domains, "
            << scenario.transfers.size() << " transfers to " << outDir << "\n";
  return 0;
}

int cmd_materialize(const std::string& inPath, const std::string& outPath) {
  fs::path in(inPath);
  DomainOntology o = parse_ontology(in.stem().string(), read_file(in));
  DomainOntology closed = materialize(o);
  atomic_write(outPath, serialize_ontology(closed));
  std::cout << "materialized " << o.abox.size() << " -> " << closed.abox.size() << " facts\n";
  return 0;
}

int cmd_mine(const Settings& s, const std::string& transfersPath, const std::string& domainsDir,
             const std::string& signaturesPath, const std::string& feature,
             const std::string& outPath, const std::string& explainPath,
             const std::string& phrasesPath) {
  std::vector<TransferRecord> transfers = load_transfer_log(read_file(transfersPath));
  if (!feature.empty()) {
    std::erase_if(transfers, [&](const TransferRecord& t) { return t.feature != feature; });
  } else {
    std::set<std::string> features;
    for (const TransferRecord& t : transfers) features.insert(t.feature);
    if (features.size() > 1)
      fail(Errc::Usage, "transfer log has " + std::to_string(features.size()) +
                            " features; pick one with --feature");
  }
  std::vector<DomainOntology> domains = load_domain_dir(domainsDir);
  std::vector<DomainSignature> signatures = parse_signature_file(read_file(signaturesPath));

  MinerConfig config;
  config.thetaPos = s.thetaPos;
  config.thetaNeg = s.thetaNeg;
  config.alpha = s.alpha;
  config.minSupport = s.minSupport;
  config.maxDimension = s.maxDim;
  config.beamWidth = s.beam;
  config.jobs = s.jobs;

  EvidenceReport report = mine(transfers, domains, signatures, config);
  atomic_write(outPath, report_json(report));
  std::cout << "accepted " << report.evidences.size() << " evidences ("
            << report.candidatesScanned << " combinations scanned)\n";

  if (!explainPath.empty()) {
    PhraseTable phrases;
    if (!phrasesPath.empty()) phrases = parse_phrase_table(read_file(phrasesPath));
    std::string text;
    for (const Evidence& ev : report.evidences) {
      for (size_t t = 0; t < transfers.size(); ++t) {
        if (!ev.indicator[t]) continue;
        text += render_explanation(ev, transfers[t], signatures, phrases) + "\n";
        break;
      }
    }
    atomic_write(explainPath, text);
  }
  return 0;
}

int cmd_enrich(const Settings& s, const std::string& inPath, const std::string& signaturesPath,
               const std::string& dumpPath, const std::string& labelPredicates,
               const std::string& outPath, const std::string& reportPath,
               const std::string& lookupHost, int lookupPort, const std::string& lookupPath) {
  fs::path in(inPath);
  DomainOntology o = parse_ontology(in.stem().string(), read_file(in));
  std::vector<DomainSignature> signatures = parse_signature_file(read_file(signaturesPath));
  const DomainSignature* sig = nullptr;
  for (const DomainSignature& candidate : signatures)
    if (candidate.domainId == o.id) sig = &candidate;
  if (!sig) fail(Errc::Usage, "no signature for domain '" + o.id + "'");

  TripleSet kg = parse_ntriples(read_file(dumpPath));
  std::vector<std::string> preds = comma_list(labelPredicates);
  if (preds.empty()) preds.push_back(kRdfsLabel);
  LexicalIndex idx = build_lexical_index(kg, preds);

  std::set<std::string> roots = select_root_individuals(o, *sig, s.radius);
  AmbiguityPolicy policy = s.ambiguous == "first" ? AmbiguityPolicy::First : AmbiguityPolicy::Skip;
  if (s.ambiguous != "first" && s.ambiguous != "skip")
    fail(Errc::Usage, "--ambiguous must be 'skip' or 'first'");

  EnrichResult result;
  if (!lookupHost.empty()) {
    HttpLookupResolver resolver(lookupHost, lookupPort, lookupPath);
    result = enrich(o, kg, resolver, roots, s.hops, policy);
  } else {
    result = enrich(o, kg, idx, roots, s.hops, policy);
  }
  atomic_write(outPath, serialize_ontology(result.ontology));
  if (!reportPath.empty()) atomic_write(reportPath, alignment_report_json(result.report));
  std::cout << "enriched " << o.abox.size() << " -> " << result.ontology.abox.size()
            << " assertion axioms\n";
  return 0;
}

int cmd_zsl(const Settings& s, const std::string& dumpPath, const std::string& seenPath,
            const std::string& unseenPath, const std::string& propertyPredicates,
            const std::string& hierarchyPredicate, const std::string& labelPredicates,
            const std::string& paramsPath, const std::string& attentionPath,
            const std::string& featuresPath, bool multiHop, int hopDepth,
            const std::string& outPath) {
  TripleSet kg = parse_ntriples(read_file(dumpPath));
  ClassGraphConfig config;
  config.seen = read_lines(seenPath);
  config.unseen = read_lines(unseenPath);
  config.propertyPredicates = comma_list(propertyPredicates);
  if (!hierarchyPredicate.empty()) config.hierarchyPredicate = hierarchyPredicate;
  if (!labelPredicates.empty()) config.labelPredicates = comma_list(labelPredicates);
  if (!featuresPath.empty()) {
    config.featureSource.kind = FeatureSource::Kind::File;
    config.featureSource.path = featuresPath;
  } else {
    config.featureSource.kind = FeatureSource::Kind::Random;
    config.featureSource.dim = s.featureDim;
    config.featureSource.seed = s.seed;
  }
  ClassGraph g = build_class_graph(kg, config);

  AttentionMap att;
  if (!attentionPath.empty()) {
    att = parse_attention_file(read_file(attentionPath), g);
  } else {
    GatParams params = paramsPath.empty() ? random_gat_params(g.featureDim, s.seed)
                                          : parse_gat_params(read_file(paramsPath));
    att = gat_attention(g, params).attention;
  }
  if (multiHop) att = multi_hop_attention(att, g, hopDepth);

  JustifyTemplates templates;
  nlohmann::json out = nlohmann::json::array();
  for (const std::string& unseenId : g.unseen) {
    Justification j = justify(g, att, unseenId, s.k, templates);
    out.push_back(nlohmann::json::parse(justification_json(j)));
  }
  atomic_write(outPath, out.dump(2) + "\n");
  std::cout << "justified " << g.unseen.size() << " unseen classes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph-backed transfer learning explanation"};
  app.require_subcommand(1);

  Settings s;
  std::string configPath;

  // The config file is applied before parsing so explicit flags override it.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) configPath = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) configPath = arg.substr(9);
  }
  try {
    if (!configPath.empty()) apply_config(configPath, s);
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  app.add_option("--config", configPath, "flat JSON config file");

  std::string outDir, inPath, outPath = "report.json";
  int numDomains = 12, numTransfers = 40, numPos = 2, numNeg = 1, noiseFacts = 30;
  double effect = 0.5, noiseSigma = 0.05, base = 0.0, mixedFraction = 0.1;

  CLI::App* synth = app.add_subcommand("synth", "generate a planted-evidence scenario");
  synth->add_option("--out", outDir, "output directory")->required();
  synth->add_option("--seed", s.seed, "random seed");
  synth->add_option("--domains", numDomains, "number of domains");
  synth->add_option("--transfers", numTransfers, "number of transfers");
  synth->add_option("--pos", numPos, "positive planted evidences");
  synth->add_option("--neg", numNeg, "negative planted evidences");
  synth->add_option("--effect", effect, "planted effect magnitude");
  synth->add_option("--noise-sigma", noiseSigma, "score noise sigma");
  synth->add_option("--base", base, "base score");
  synth->add_option("--mixed-fraction", mixedFraction, "fraction of cross-cluster transfers");
  synth->add_option("--noise-facts", noiseFacts, "number of filler facts");

  std::string matOut;
  CLI::App* mat = app.add_subcommand("materialize", "compute the ABox closure of an ontology");
  mat->add_option("--in", inPath, "input .axioms file")->required();
  mat->add_option("--out", matOut, "output .axioms file")->required();

  std::string transfersPath, domainsDir, signaturesPath, feature, explainPath, phrasesPath;
  CLI::App* mineCmd = app.add_subcommand("mine", "mine explanatory evidences");
  mineCmd->add_option("--transfers", transfersPath, "transfer log CSV")->required();
  mineCmd->add_option("--domains", domainsDir, "directory of .axioms files")->required();
  mineCmd->add_option("--signatures", signaturesPath, "signature file")->required();
  mineCmd->add_option("--feature", feature, "mine only this feature id");
  mineCmd->add_option("--theta-pos", s.thetaPos, "positive correlation threshold");
  mineCmd->add_option("--theta-neg", s.thetaNeg, "negative correlation threshold");
  mineCmd->add_option("--alpha", s.alpha, "significance level");
  mineCmd->add_option("--min-support", s.minSupport, "minimum co-existence support");
  mineCmd->add_option("--max-dim", s.maxDim, "maximum combination size");
  mineCmd->add_option("--beam", s.beam, "beam width (0 = unlimited)");
  mineCmd->add_option("--jobs", s.jobs, "worker threads");
  mineCmd->add_option("--out", outPath, "report JSON path");
  mineCmd->add_option("--explain", explainPath, "also write rendered explanations here");
  mineCmd->add_option("--phrases", phrasesPath, "phrase table JSON for explanations");

  std::string dumpPath, labelPredicates, reportPath, lookupHost, lookupPath = "/lookup";
  std::string enrichOut;
  int lookupPort = 0;
  CLI::App* enrichCmd = app.add_subcommand("enrich", "align roots with a KG dump and import facts");
  enrichCmd->add_option("--in", inPath, "input .axioms file")->required();
  enrichCmd->add_option("--signatures", signaturesPath, "signature file")->required();
  enrichCmd->add_option("--kg-dump", dumpPath, "N-Triples dump")->required();
  enrichCmd->add_option("--label-predicates", labelPredicates, "comma list of label predicate IRIs");
  enrichCmd->add_option("--hops", s.hops, "import depth around matched entities");
  enrichCmd->add_option("--radius", s.radius, "root selection radius");
  enrichCmd->add_option("--ambiguous", s.ambiguous, "skip|first");
  enrichCmd->add_option("--out", enrichOut, "enriched .axioms output")->required();
  enrichCmd->add_option("--report", reportPath, "alignment report JSON");
  enrichCmd->add_option("--lookup-host", lookupHost, "HTTP lookup service host");
  enrichCmd->add_option("--lookup-port", lookupPort, "HTTP lookup service port");
  enrichCmd->add_option("--lookup-path", lookupPath, "HTTP lookup service path");

  std::string seenPath, unseenPath, propertyPredicates, hierarchyPredicate, paramsPath,
      attentionPath, featuresPath;
  bool multiHop = false;
  int hopDepth = 2;
  CLI::App* zsl = app.add_subcommand("zsl-justify", "justify zero-shot class models");
  zsl->add_option("--kg-dump", dumpPath, "N-Triples dump")->required();
  zsl->add_option("--seen", seenPath, "file of seen class labels")->required();
  zsl->add_option("--unseen", unseenPath, "file of unseen class labels")->required();
  zsl->add_option("--property-predicates", propertyPredicates, "comma list of property IRIs");
  zsl->add_option("--hierarchy-predicate", hierarchyPredicate, "subclass predicate IRI");
  zsl->add_option("--label-predicates", labelPredicates, "comma list of label predicate IRIs");
  zsl->add_option("--params", paramsPath, "GAT parameter file");
  zsl->add_option("--attention", attentionPath, "supplied attention file");
  zsl->add_option("--features", featuresPath, "node feature file");
  zsl->add_option("--feature-dim", s.featureDim, "random feature dimension");
  zsl->add_option("--seed", s.seed, "seed for random features/parameters");
  zsl->add_option("--k", s.k, "impressive class count");
  zsl->add_flag("--multi-hop", multiHop, "propagate attention over multiple hops");
  zsl->add_option("--hop-depth", hopDepth, "multi-hop propagation depth");
  zsl->add_option("--out", outPath, "justification JSON path");

  // Already applied above; registered here so it parses in subcommand position.
  for (CLI::App* sub : {synth, mat, mineCmd, enrichCmd, zsl})
    sub->add_option("--config", configPath, "flat JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth->parsed())
      return cmd_synth(s, outDir, numDomains, numTransfers, numPos, numNeg, effect, noiseSigma,
                       base, mixedFraction, noiseFacts);
    if (mat->parsed()) return cmd_materialize(inPath, matOut);
    if (mineCmd->parsed())
      return cmd_mine(s, transfersPath, domainsDir, signaturesPath, feature, outPath, explainPath,
                      phrasesPath);
    if (enrichCmd->parsed())
      return cmd_enrich(s, inPath, signaturesPath, dumpPath, labelPredicates, enrichOut,
                        reportPath, lookupHost, lookupPort, lookupPath);
    if (zsl->parsed())
      return cmd_zsl(s, dumpPath, seenPath, unseenPath, propertyPredicates, hierarchyPredicate,
                     labelPredicates, paramsPath, attentionPath, featuresPath, multiHop, hopDepth,
                     outPath);
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
