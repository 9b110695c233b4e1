#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgx/axiom.h"
#include "kgx/stats.h"
#include "kgx/transfer.h"

namespace kgx {

struct MinerConfig {
  double thetaPos = 0.6;
  double thetaNeg = -0.6;
  double alpha = 0.05;
  int minSupport = 2;
  int maxDimension = 3;
  int beamWidth = 50;  // 0 = unlimited (exhaustive extension)
  int jobs = 1;
};

struct Evidence {
  std::vector<AxiomTemplate> axioms;  // sorted by text
  std::string polarity;               // positive | negative
  CorrelationResult stats;
  std::vector<int> indicator;  // per-transfer co-existence, for auditability

  std::string key() const;  // serialized axiom texts, joined
};

struct EvidenceReport {
  MinerConfig config;
  int candidatesScanned = 0;
  int skippedZeroVariance = 0;
  std::vector<Evidence> evidences;  // sorted by |r| desc, then lexicographic
};

// Lifts every materialized ABox fact of every domain into templates by
// substituting signature-bound individuals with their roles (all combinations
// of substitutions), keeps templates whose grounding holds in at least two
// domains, and returns the sorted, deduplicated union.
std::vector<AxiomTemplate> enumerate_candidates(const std::vector<DomainOntology>& domains,
                                                const std::vector<DomainSignature>& signatures);

// True iff every template, grounded with the source signature, is entailed by
// the source ontology, and likewise on the target side.
bool coexists(const std::vector<AxiomTemplate>& evidence, const TransferRecord& transfer,
              const std::vector<DomainOntology>& domains,
              const std::vector<DomainSignature>& signatures);

// Correlative reasoning: scores dimension-1 candidates, then grows surviving
// combinations one template at a time. A combination is accepted when its
// correlation passes thetaPos/thetaNeg with pValue <= alpha, its support is
// at least minSupport, and its |r| strictly improves on every accepted
// subset. Combinations below minSupport are pruned from extension (support is
// anti-monotone); only the beamWidth best |r| survivors extend per dimension.
EvidenceReport mine(const std::vector<TransferRecord>& transfers,
                    const std::vector<DomainOntology>& domains,
                    const std::vector<DomainSignature>& signatures, const MinerConfig& config);

struct PhraseTable {
  std::map<std::string, std::string> predicates;  // phrase with {subject}/{object}
  std::map<std::string, std::string> concepts;    // phrase with {subject}
  std::map<std::string, std::string> roles;       // role -> description
};

PhraseTable parse_phrase_table(const std::string& jsonText);

// "the transfer from {src} to {tgt} is {polarity} as {clause; clause; ...}",
// one clause per axiom, falling back to the raw axiom text when the phrase
// table has no entry.
std::string render_explanation(const Evidence& evidence, const TransferRecord& transfer,
                               const std::vector<DomainSignature>& signatures,
                               const PhraseTable& phrases);

std::string report_json(const EvidenceReport& report);

}  // namespace kgx
