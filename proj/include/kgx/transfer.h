#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kgx/axiom.h"

namespace kgx {

struct TransferRecord {
  std::string source;
  std::string target;
  std::string feature;
  double score = 0.0;

  friend bool operator==(const TransferRecord&, const TransferRecord&) = default;
};

// CSV with header `src,tgt,feature,score`. A `positive`/`negative` label in
// the score column maps to +1.0/-1.0.
std::vector<TransferRecord> load_transfer_log(const std::string& csv);
std::string serialize_transfer_log(const std::vector<TransferRecord>& records);

struct PlantedSpec {
  std::vector<AxiomTemplate> templates;
  double effect = 0.0;  // sign is the polarity

  std::string polarity() const { return effect >= 0 ? "positive" : "negative"; }
};

struct ScenarioConfig {
  int numDomains = 12;
  int numTransfers = 40;
  std::vector<PlantedSpec> planted;
  double noiseSigma = 0.05;
  double baseScore = 0.0;
  // Fraction of transfers drawn across the two domain clusters rather than
  // within one; cross pairs carry no planted co-existence.
  double mixedPairFraction = 0.1;
  int noiseFacts = 30;        // distinct filler facts scattered over domains
  int noiseVocabulary = 12;   // individuals the filler facts draw from
};

struct SynthScenario {
  std::vector<DomainOntology> domains;
  std::vector<DomainSignature> signatures;
  std::vector<TransferRecord> transfers;
  std::vector<PlantedSpec> planted;
  double noiseSigma = 0.0;
  uint64_t seed = 0;
  // Generator bookkeeping: hasEvidence[d][k] = domain d carries the grounded
  // facts of planted evidence k. Co-existence on a transfer is the AND of
  // its two endpoints.
  std::vector<std::vector<bool>> hasEvidence;
};

// Positive specs are single-template evidences over the ?ori role, negative
// ones over the ?car role, all with the given |effect| and alternating sign
// groups as requested.
std::vector<PlantedSpec> make_default_planted(int numPositive, int numNegative, double effect);

// Deterministic in (config, seed).
SynthScenario generate_scenario(const ScenarioConfig& config, uint64_t seed);

// Layout: domains/<id>.axioms, signatures.txt, transfers.csv, planted.json
void write_scenario(const SynthScenario& scenario, const std::filesystem::path& dir);

std::string planted_json(const std::vector<PlantedSpec>& planted);

}  // namespace kgx
