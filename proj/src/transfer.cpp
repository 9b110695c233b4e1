#include "kgx/transfer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "kgx/error.h"
#include "kgx/rng.h"
#include "kgx/util.h"

namespace kgx {

namespace {

[[noreturn]] void row_fail(int row, const std::string& msg) {
  fail(Errc::Parse, "row " + std::to_string(row) + ": " + msg);
}

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", score);
  return buf;
}

}  // namespace

std::vector<TransferRecord> load_transfer_log(const std::string& csv) {
  std::vector<std::string> lines = split(csv, '\n');
  size_t lineIdx = 0;
  while (lineIdx < lines.size() && trim(lines[lineIdx]).empty()) ++lineIdx;
  if (lineIdx >= lines.size() || trim(lines[lineIdx]) != "src,tgt,feature,score")
    fail(Errc::Parse, "transfer log must start with header 'src,tgt,feature,score'");

  std::vector<TransferRecord> out;
  int row = 0;
  for (size_t i = lineIdx + 1; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 4) row_fail(row, "expected 4 columns, got " + std::to_string(cols.size()));
    TransferRecord rec;
    rec.source = trim(cols[0]);
    rec.target = trim(cols[1]);
    rec.feature = trim(cols[2]);
    std::string scoreText = trim(cols[3]);
    if (rec.source.empty() || rec.target.empty() || rec.feature.empty())
      row_fail(row, "empty column");
    if (rec.source == rec.target) row_fail(row, "source equals target");
    if (scoreText == "positive") {
      rec.score = 1.0;
    } else if (scoreText == "negative") {
      rec.score = -1.0;
    } else {
      try {
        size_t used = 0;
        rec.score = std::stod(scoreText, &used);
        if (used != scoreText.size()) throw std::invalid_argument(scoreText);
      } catch (const std::exception&) {
        row_fail(row, "unparsable score '" + scoreText + "'");
      }
      if (!std::isfinite(rec.score)) row_fail(row, "non-finite score");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_transfer_log(const std::vector<TransferRecord>& records) {
  std::string out = "src,tgt,feature,score\n";
  for (const TransferRecord& r : records)
    out += r.source + "," + r.target + "," + r.feature + "," + format_score(r.score) + "\n";
  return out;
}

std::vector<PlantedSpec> make_default_planted(int numPositive, int numNegative, double effect) {
  std::vector<PlantedSpec> out;
  for (int k = 0; k < numPositive; ++k) {
    PlantedSpec spec;
    if (k % 2 == 0) {
      spec.templates.push_back(Axiom(PropertyAssertion{
          "posTrait" + std::to_string(k + 1), Term::role("ori"),
          Term::individual("PosVal" + std::to_string(k + 1))}));
    } else {
      spec.templates.push_back(
          Axiom(ClassAssertion{"PosClass" + std::to_string(k + 1), Term::role("car")}));
    }
    spec.effect = std::fabs(effect);
    out.push_back(std::move(spec));
  }
  for (int k = 0; k < numNegative; ++k) {
    PlantedSpec spec;
    if (k % 2 == 0) {
      spec.templates.push_back(Axiom(PropertyAssertion{
          "negTrait" + std::to_string(k + 1), Term::role("car"),
          Term::individual("NegVal" + std::to_string(k + 1))}));
    } else {
      spec.templates.push_back(
          Axiom(ClassAssertion{"NegClass" + std::to_string(k + 1), Term::role("des")}));
    }
    spec.effect = -std::fabs(effect);
    out.push_back(std::move(spec));
  }
  return out;
}

SynthScenario generate_scenario(const ScenarioConfig& config, uint64_t seed) {
  if (config.numDomains < 4) fail(Errc::Infeasible, "need at least 4 domains");
  if (config.numTransfers < 3) fail(Errc::Infeasible, "need at least 3 transfers");
  for (const PlantedSpec& spec : config.planted) {
    if (spec.effect == 0.0) fail(Errc::BadInput, "planted effect must be nonzero");
    if (spec.templates.empty()) fail(Errc::BadInput, "planted evidence has no templates");
  }

  Rng rng(seed);
  SynthScenario sc;
  sc.planted = config.planted;
  sc.noiseSigma = config.noiseSigma;
  sc.seed = seed;

  int n = config.numDomains;
  std::vector<std::string> ids;
  for (int d = 0; d < n; ++d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%02d", d + 1);
    ids.push_back(buf);
  }

  // Two clusters: positive evidences live in one, negative in the other.
  // Transfers are mostly drawn within a cluster, so co-existence patterns
  // separate cleanly and planted effects are recoverable.
  std::vector<int> order(n);
  for (int d = 0; d < n; ++d) order[d] = d;
  rng.shuffle(order);
  std::vector<bool> inPositiveCluster(n, false);
  std::vector<int> posCluster, negCluster;
  for (int i = 0; i < n; ++i) {
    if (i < n / 2) {
      inPositiveCluster[order[i]] = true;
      posCluster.push_back(order[i]);
    } else {
      negCluster.push_back(order[i]);
    }
  }
  std::sort(posCluster.begin(), posCluster.end());
  std::sort(negCluster.begin(), negCluster.end());

  sc.hasEvidence.assign(n, std::vector<bool>(config.planted.size(), false));
  for (int d = 0; d < n; ++d) {
    DomainSignature sig;
    sig.domainId = ids[d];
    sig.bindings["car"] = "CAR_" + ids[d];
    sig.bindings["ori"] = "ORI_" + ids[d];
    sig.bindings["des"] = "DES_" + ids[d];

    DomainOntology o;
    o.id = ids[d];
    o.insert(Axiom(PropertyAssertion{"route", Term::individual(sig.bindings["ori"]),
                                     Term::individual(sig.bindings["des"])}));
    o.insert(Axiom(PropertyAssertion{"operatedBy", Term::individual(sig.bindings["ori"]),
                                     Term::individual(sig.bindings["car"])}));

    for (size_t k = 0; k < config.planted.size(); ++k) {
      bool carries = config.planted[k].effect > 0 ? inPositiveCluster[d] : !inPositiveCluster[d];
      if (!carries) continue;
      sc.hasEvidence[d][k] = true;
      for (const AxiomTemplate& t : config.planted[k].templates) o.insert(ground_template(t, sig));
    }
    sc.domains.push_back(std::move(o));
    sc.signatures.push_back(std::move(sig));
  }

  // Filler facts over a shared vocabulary, each scattered across a few
  // domains; their lifted templates become real (uncorrelated) candidates.
  for (int f = 0; f < config.noiseFacts; ++f) {
    std::string prop = "sharesHub";
    std::string a = "HUB_" + std::to_string(1 + rng.below(std::max(1, config.noiseVocabulary)));
    std::string b = "CITY_" + std::to_string(1 + rng.below(std::max(1, config.noiseVocabulary)));
    Axiom fact(PropertyAssertion{prop, Term::individual(a), Term::individual(b)});
    int copies = 2 + static_cast<int>(rng.below(3));
    for (int c = 0; c < copies; ++c) sc.domains[rng.below(n)].insert(fact);
  }

  int mixed = static_cast<int>(std::lround(config.numTransfers * config.mixedPairFraction));
  for (int i = 0; i < config.numTransfers; ++i) {
    int src, tgt;
    if (i < mixed) {
      src = posCluster[rng.below(posCluster.size())];
      tgt = negCluster[rng.below(negCluster.size())];
      if (rng.below(2) == 1) std::swap(src, tgt);
    } else {
      const std::vector<int>& cluster = (i % 2 == 0) ? posCluster : negCluster;
      src = cluster[rng.below(cluster.size())];
      do {
        tgt = cluster[rng.below(cluster.size())];
      } while (tgt == src);
    }
    TransferRecord rec;
    rec.source = ids[src];
    rec.target = ids[tgt];
    rec.feature = "conv3";
    rec.score = config.baseScore;
    for (size_t k = 0; k < config.planted.size(); ++k)
      if (sc.hasEvidence[src][k] && sc.hasEvidence[tgt][k]) rec.score += config.planted[k].effect;
    if (config.noiseSigma > 0) rec.score += rng.gaussian(0.0, config.noiseSigma);
    sc.transfers.push_back(std::move(rec));
  }
  rng.shuffle(sc.transfers);
  return sc;
}

std::string planted_json(const std::vector<PlantedSpec>& planted) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PlantedSpec& spec : planted) {
    nlohmann::json axioms = nlohmann::json::array();
    for (const AxiomTemplate& t : spec.templates) axioms.push_back(t.text());
    arr.push_back({{"axioms", axioms}, {"polarity", spec.polarity()}, {"effect", spec.effect}});
  }
  return arr.dump(2) + "\n";
}

void write_scenario(const SynthScenario& scenario, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "domains", ec);
  if (ec) fail(Errc::Io, "cannot create " + (dir / "domains").string());
  for (const DomainOntology& o : scenario.domains)
    atomic_write(dir / "domains" / (o.id + ".axioms"), serialize_ontology(o));
  atomic_write(dir / "signatures.txt", serialize_signatures(scenario.signatures));
  atomic_write(dir / "transfers.csv", serialize_transfer_log(scenario.transfers));
  atomic_write(dir / "planted.json", planted_json(scenario.planted));
}

}  // namespace kgx
