#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgx/axiom.h"
#include "kgx/triples.h"

namespace kgx {

inline const char* kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline const char* kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// lowercase, trim, collapse internal whitespace, strip punctuation
std::string normalize_label(const std::string& label);

// normalized label -> sorted, duplicate-free entity IRIs
struct LexicalIndex {
  std::map<std::string, std::vector<std::string>> entries;
};

// Indexes every (e, p, literal) with p in labelPredicates, plus the IRI local
// name of every subject and non-literal object.
LexicalIndex build_lexical_index(const TripleSet& kg, const std::vector<std::string>& labelPredicates);

std::vector<std::string> match_label(const LexicalIndex& idx, const std::string& label);

// Ranked candidate IRIs for a label. The local dump index is the default
// backend; the HTTP variant speaks the lookup protocol of an external
// service.
class LabelResolver {
 public:
  virtual ~LabelResolver() = default;
  virtual std::vector<std::string> resolve(const std::string& label) const = 0;
};

class IndexResolver : public LabelResolver {
 public:
  explicit IndexResolver(const LexicalIndex& idx) : idx_(idx) {}
  std::vector<std::string> resolve(const std::string& label) const override {
    return match_label(idx_, label);
  }

 private:
  const LexicalIndex& idx_;
};

// GET <path>?label=<label>, response body = one IRI per line, ranked.
class HttpLookupResolver : public LabelResolver {
 public:
  HttpLookupResolver(std::string host, int port, std::string path = "/lookup");
  std::vector<std::string> resolve(const std::string& label) const override;

 private:
  std::string host_;
  int port_;
  std::string path_;
};

// Signature-bound individuals plus everything within `radius` undirected
// PropertyAssertion hops of them.
std::set<std::string> select_root_individuals(const DomainOntology& o, const DomainSignature& sig,
                                              int radius);

enum class AmbiguityPolicy { Skip, First };

struct AlignmentEntry {
  std::string root;
  std::string status;  // matched | ambiguous | unmatched
  std::string entity;  // IRI when matched
};

struct EnrichResult {
  DomainOntology ontology;
  std::vector<AlignmentEntry> report;
};

// For each root with a unique best label match, imports dump triples within
// `hops` of the matched entity: rdf:type -> ClassAssertion, rdfs:subClassOf
// -> SUB, everything else -> PropertyAssertion. IRIs become identifiers via
// their local name, with collision suffixing; the matched entity maps onto
// the root individual itself. Never removes axioms; idempotent.
EnrichResult enrich(const DomainOntology& o, const TripleSet& kg, const LabelResolver& resolver,
                    const std::set<std::string>& roots, int hops,
                    AmbiguityPolicy policy = AmbiguityPolicy::Skip);

EnrichResult enrich(const DomainOntology& o, const TripleSet& kg, const LexicalIndex& idx,
                    const std::set<std::string>& roots, int hops,
                    AmbiguityPolicy policy = AmbiguityPolicy::Skip);

std::string alignment_report_json(const std::vector<AlignmentEntry>& report);

}  // namespace kgx
