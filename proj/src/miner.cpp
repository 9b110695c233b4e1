#include "kgx/miner.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "json.hpp"
#include "kgx/error.h"
#include "kgx/reasoner.h"
#include "kgx/util.h"

namespace kgx {

namespace {

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  size_t workers = std::min<size_t>(jobs, count);
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

std::vector<DomainOntology> ensure_materialized(const std::vector<DomainOntology>& domains) {
  std::vector<DomainOntology> out;
  out.reserve(domains.size());
  for (const DomainOntology& o : domains) out.push_back(o.materialized ? o : materialize(o));
  return out;
}

const DomainSignature& signature_for(const std::vector<DomainSignature>& signatures,
                                     const std::string& domainId) {
  for (const DomainSignature& sig : signatures)
    if (sig.domainId == domainId) return sig;
  fail(Errc::BadInput, "no signature for domain " + domainId);
}

// All templates obtainable from one fact by replacing signature-bound
// individuals with their roles, any subset of positions independently.
void lift_fact(const Axiom& fact, const std::map<std::string, std::vector<std::string>>& rolesOf,
               std::set<AxiomTemplate>& out) {
  auto options = [&](const Term& t) {
    std::vector<Term> opts{t};
    if (t.is_individual()) {
      auto it = rolesOf.find(t.text);
      if (it != rolesOf.end())
        for (const std::string& role : it->second) opts.push_back(Term::role(role));
    }
    return opts;
  };
  if (const auto* ca = fact.as<ClassAssertion>()) {
    for (const Term& ind : options(ca->individual)) out.insert(Axiom(ClassAssertion{ca->conceptName, ind}));
  } else if (const auto* pa = fact.as<PropertyAssertion>()) {
    for (const Term& s : options(pa->subject))
      for (const Term& o : options(pa->object))
        out.insert(Axiom(PropertyAssertion{pa->property, s, o}));
  }
}

bool holds_in(const AxiomTemplate& t, const DomainOntology& materializedDomain,
              const DomainSignature& sig) {
  try {
    return entails(materializedDomain, ground_template(t, sig));
  } catch (const Error& e) {
    if (e.code() == Errc::UnboundRole) return false;
    throw;
  }
}

}  // namespace

std::vector<AxiomTemplate> enumerate_candidates(const std::vector<DomainOntology>& domains,
                                                const std::vector<DomainSignature>& signatures) {
  if (domains.empty()) fail(Errc::BadInput, "empty domain list");
  std::vector<DomainOntology> mat = ensure_materialized(domains);

  std::set<AxiomTemplate> lifted;
  for (const DomainOntology& o : mat) {
    const DomainSignature& sig = signature_for(signatures, o.id);
    std::map<std::string, std::vector<std::string>> rolesOf;
    for (const auto& [role, individual] : sig.bindings) rolesOf[individual].push_back(role);
    for (const Axiom& fact : o.abox) lift_fact(fact, rolesOf, lifted);
  }

  std::vector<AxiomTemplate> out;
  for (const AxiomTemplate& t : lifted) {
    int count = 0;
    for (const DomainOntology& o : mat)
      if (holds_in(t, o, signature_for(signatures, o.id)) && ++count >= 2) break;
    if (count >= 2) out.push_back(t);
  }
  return out;  // set iteration order: sorted by text
}

bool coexists(const std::vector<AxiomTemplate>& evidence, const TransferRecord& transfer,
              const std::vector<DomainOntology>& domains,
              const std::vector<DomainSignature>& signatures) {
  if (evidence.empty()) fail(Errc::BadInput, "empty evidence");
  auto find_domain = [&](const std::string& id) -> const DomainOntology& {
    for (const DomainOntology& o : domains)
      if (o.id == id) return o;
    fail(Errc::BadInput, "unknown domain " + id);
  };
  const DomainOntology& src = find_domain(transfer.source);
  const DomainOntology& tgt = find_domain(transfer.target);
  const DomainSignature& srcSig = signature_for(signatures, transfer.source);
  const DomainSignature& tgtSig = signature_for(signatures, transfer.target);
  for (const AxiomTemplate& t : evidence) {
    if (!entails(src, ground_template(t, srcSig))) return false;
    if (!entails(tgt, ground_template(t, tgtSig))) return false;
  }
  return true;
}

std::string Evidence::key() const {
  std::vector<std::string> texts;
  for (const AxiomTemplate& a : axioms) texts.push_back(a.text());
  return join(texts, " & ");
}

namespace {

struct Combo {
  std::vector<int> indices;  // ascending candidate indices
  std::vector<char> domainBits;
  CorrelationResult stats;
  bool statsValid = false;
  bool zeroVariance = false;
  std::vector<int> indicator;

  double sortR() const { return statsValid ? std::fabs(stats.r) : 0.0; }
};

}  // namespace

EvidenceReport mine(const std::vector<TransferRecord>& transfers,
                    const std::vector<DomainOntology>& domains,
                    const std::vector<DomainSignature>& signatures, const MinerConfig& config) {
  if (transfers.size() < 3)
    fail(Errc::TooFewSamples, "need at least 3 transfers, got " + std::to_string(transfers.size()));

  std::vector<DomainOntology> mat = ensure_materialized(domains);
  std::map<std::string, int> domainIndex;
  for (size_t i = 0; i < mat.size(); ++i) domainIndex[mat[i].id] = static_cast<int>(i);
  std::vector<std::pair<int, int>> endpoints;
  for (const TransferRecord& t : transfers) {
    auto s = domainIndex.find(t.source);
    auto g = domainIndex.find(t.target);
    if (s == domainIndex.end()) fail(Errc::BadInput, "transfer references unknown domain " + t.source);
    if (g == domainIndex.end()) fail(Errc::BadInput, "transfer references unknown domain " + t.target);
    endpoints.push_back({s->second, g->second});
  }
  std::vector<double> scores;
  for (const TransferRecord& t : transfers) scores.push_back(t.score);

  EvidenceReport report;
  report.config = config;

  std::vector<AxiomTemplate> candidates = enumerate_candidates(mat, signatures);
  if (candidates.empty()) return report;

  // candidate x domain entailment matrix; everything after this is bit math
  std::vector<std::vector<char>> holds(candidates.size(), std::vector<char>(mat.size(), 0));
  parallel_for(candidates.size(), config.jobs, [&](size_t c) {
    for (size_t d = 0; d < mat.size(); ++d)
      holds[c][d] = holds_in(candidates[c], mat[d], signature_for(signatures, mat[d].id)) ? 1 : 0;
  });

  int n = static_cast<int>(transfers.size());
  int zeroVarianceCount = 0;
  int scanned = 0;

  auto evaluate = [&](Combo& combo) {
    combo.indicator.resize(n);
    int support = 0;
    for (int t = 0; t < n; ++t) {
      combo.indicator[t] =
          (combo.domainBits[endpoints[t].first] && combo.domainBits[endpoints[t].second]) ? 1 : 0;
      support += combo.indicator[t];
    }
    if (support == 0 || support == n) {
      combo.zeroVariance = true;
      combo.stats.support = support;
      combo.stats.n = n;
      return;
    }
    try {
      combo.stats = correlate(combo.indicator, scores);
      combo.statsValid = true;
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroVariance) throw;
      combo.zeroVariance = true;
    }
  };

  struct Accepted {
    std::set<int> indices;
    double absR;
  };
  std::vector<Accepted> accepted;
  std::vector<Evidence> evidences;

  auto consider = [&](const Combo& combo) {
    if (!combo.statsValid) return;
    const CorrelationResult& s = combo.stats;
    if (s.support < config.minSupport) return;
    bool positive = s.r >= config.thetaPos;
    bool negative = s.r <= config.thetaNeg;
    if (!positive && !negative) return;
    if (s.pValue > config.alpha) return;
    // A larger combination must say strictly more than what is already
    // accepted inside it.
    std::set<int> asSet(combo.indices.begin(), combo.indices.end());
    for (const Accepted& prev : accepted) {
      if (prev.indices.size() >= asSet.size()) continue;
      if (std::includes(asSet.begin(), asSet.end(), prev.indices.begin(), prev.indices.end()) &&
          std::fabs(s.r) <= prev.absR)
        return;
    }
    Evidence ev;
    for (int idx : combo.indices) ev.axioms.push_back(candidates[idx]);
    ev.polarity = positive ? "positive" : "negative";
    ev.stats = s;
    ev.indicator = combo.indicator;
    accepted.push_back({std::move(asSet), std::fabs(s.r)});
    evidences.push_back(std::move(ev));
  };

  // Dimension 1
  std::vector<Combo> frontier(candidates.size());
  parallel_for(candidates.size(), config.jobs, [&](size_t c) {
    frontier[c].indices = {static_cast<int>(c)};
    frontier[c].domainBits = holds[c];
    evaluate(frontier[c]);
  });
  scanned += static_cast<int>(frontier.size());
  for (const Combo& combo : frontier) {
    if (combo.zeroVariance) ++zeroVarianceCount;
    consider(combo);
  }

  for (int dim = 2; dim <= config.maxDimension; ++dim) {
    // Early stop: only combinations that can still reach minSupport extend.
    std::vector<const Combo*> survivors;
    for (const Combo& combo : frontier)
      if (combo.stats.support >= config.minSupport) survivors.push_back(&combo);
    std::stable_sort(survivors.begin(), survivors.end(), [](const Combo* a, const Combo* b) {
      return a->sortR() > b->sortR();
    });
    if (config.beamWidth > 0 && static_cast<int>(survivors.size()) > config.beamWidth)
      survivors.resize(config.beamWidth);

    std::vector<Combo> next;
    for (const Combo* base : survivors) {
      int last = base->indices.back();
      for (int c = last + 1; c < static_cast<int>(candidates.size()); ++c) {
        Combo combo;
        combo.indices = base->indices;
        combo.indices.push_back(c);
        combo.domainBits.resize(mat.size());
        for (size_t d = 0; d < mat.size(); ++d)
          combo.domainBits[d] = base->domainBits[d] && holds[c][d];
        next.push_back(std::move(combo));
      }
    }
    if (next.empty()) break;
    parallel_for(next.size(), config.jobs, [&](size_t i) { evaluate(next[i]); });
    scanned += static_cast<int>(next.size());
    std::sort(next.begin(), next.end(),
              [](const Combo& a, const Combo& b) { return a.indices < b.indices; });
    for (const Combo& combo : next) {
      if (combo.zeroVariance) ++zeroVarianceCount;
      consider(combo);
    }
    frontier = std::move(next);
  }

  std::stable_sort(evidences.begin(), evidences.end(), [](const Evidence& a, const Evidence& b) {
    double ra = std::fabs(a.stats.r), rb = std::fabs(b.stats.r);
    if (ra != rb) return ra > rb;
    return a.key() < b.key();
  });
  report.candidatesScanned = scanned;
  report.skippedZeroVariance = zeroVarianceCount;
  report.evidences = std::move(evidences);
  return report;
}

PhraseTable parse_phrase_table(const std::string& jsonText) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jsonText);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Parse, std::string("phrase table: ") + e.what());
  }
  PhraseTable table;
  auto load = [&](const char* key, std::map<std::string, std::string>& dst) {
    if (!j.contains(key)) return;
    for (const auto& [k, v] : j.at(key).items()) dst[k] = v.get<std::string>();
  };
  load("predicates", table.predicates);
  load("concepts", table.concepts);
  load("roles", table.roles);
  return table;
}

namespace {

std::string describe_term(const Term& t, const PhraseTable& phrases) {
  if (t.is_role()) {
    auto it = phrases.roles.find(t.text);
    return it != phrases.roles.end() ? it->second : t.text;
  }
  return t.is_literal() ? t.text_form() : t.text;
}

std::string render_clause(const AxiomTemplate& axiom, const PhraseTable& phrases) {
  if (const auto* ca = axiom.as<ClassAssertion>()) {
    auto it = phrases.concepts.find(ca->conceptName);
    if (it != phrases.concepts.end())
      return replace_all(it->second, "{subject}", describe_term(ca->individual, phrases));
  } else if (const auto* pa = axiom.as<PropertyAssertion>()) {
    auto it = phrases.predicates.find(pa->property);
    if (it != phrases.predicates.end()) {
      std::string clause = replace_all(it->second, "{subject}", describe_term(pa->subject, phrases));
      return replace_all(clause, "{object}", describe_term(pa->object, phrases));
    }
  }
  return axiom.text();
}

}  // namespace

std::string render_explanation(const Evidence& evidence, const TransferRecord& transfer,
                               const std::vector<DomainSignature>& signatures,
                               const PhraseTable& phrases) {
  const DomainSignature& srcSig = signature_for(signatures, transfer.source);
  const DomainSignature& tgtSig = signature_for(signatures, transfer.target);
  std::vector<std::string> clauses;
  for (const AxiomTemplate& axiom : evidence.axioms) {
    ground_template(axiom, srcSig);  // both groundings must succeed
    ground_template(axiom, tgtSig);
    clauses.push_back(render_clause(axiom, phrases));
  }
  return "the transfer from " + transfer.source + " to " + transfer.target + " is " +
         evidence.polarity + " as " + join(clauses, "; ");
}

std::string report_json(const EvidenceReport& report) {
  nlohmann::json j;
  j["config"] = {{"thetaPos", report.config.thetaPos}, {"thetaNeg", report.config.thetaNeg},
                 {"alpha", report.config.alpha},       {"minSupport", report.config.minSupport},
                 {"maxDimension", report.config.maxDimension}, {"beamWidth", report.config.beamWidth}};
  j["candidatesScanned"] = report.candidatesScanned;
  j["skippedZeroVariance"] = report.skippedZeroVariance;
  nlohmann::json evs = nlohmann::json::array();
  for (const Evidence& e : report.evidences) {
    nlohmann::json axioms = nlohmann::json::array();
    for (const AxiomTemplate& a : e.axioms) axioms.push_back(a.text());
    evs.push_back({{"axioms", axioms},
                   {"polarity", e.polarity},
                   {"r", e.stats.r},
                   {"n", e.stats.n},
                   {"tStat", e.stats.tStat},
                   {"pValue", e.stats.pValue},
                   {"support", e.stats.support},
                   {"indicator", e.indicator}});
  }
  j["evidences"] = std::move(evs);
  return j.dump(2) + "\n";
}

}  // namespace kgx
