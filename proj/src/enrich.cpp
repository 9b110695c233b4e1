#include "kgx/enrich.h"

#include <algorithm>
#include <cctype>
#include <deque>

#include "httplib.h"
#include "json.hpp"
#include "kgx/error.h"

namespace kgx {

std::string normalize_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (std::isspace(u)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    }
    // punctuation dropped
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

LexicalIndex build_lexical_index(const TripleSet& kg, const std::vector<std::string>& labelPredicates) {
  LexicalIndex idx;
  for (const std::string& pred : labelPredicates) {
    for (const Triple* t : kg.by_predicate(pred)) {
      if (!t->literal) continue;
      std::string key = normalize_label(t->object);
      if (!key.empty()) idx.entries[key].push_back(t->subject);
    }
  }
  for (const Triple& t : kg.triples()) {
    std::string key = normalize_label(local_name(t.subject));
    if (!key.empty()) idx.entries[key].push_back(t.subject);
    if (t.literal) continue;
    std::string objKey = normalize_label(local_name(t.object));
    if (!objKey.empty()) idx.entries[objKey].push_back(t.object);
  }
  for (auto& [key, iris] : idx.entries) {
    std::sort(iris.begin(), iris.end());
    iris.erase(std::unique(iris.begin(), iris.end()), iris.end());
  }
  return idx;
}

std::vector<std::string> match_label(const LexicalIndex& idx, const std::string& label) {
  auto it = idx.entries.find(normalize_label(label));
  if (it == idx.entries.end()) return {};
  return it->second;
}

HttpLookupResolver::HttpLookupResolver(std::string host, int port, std::string path)
    : host_(std::move(host)), port_(port), path_(std::move(path)) {}

std::vector<std::string> HttpLookupResolver::resolve(const std::string& label) const {
  httplib::Client client(host_, port_);
  httplib::Params params{{"label", label}};
  auto res = client.Get(path_, params, httplib::Headers{});
  if (!res || res->status != 200) return {};
  std::vector<std::string> out;
  std::string cur;
  for (char c : res->body) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::set<std::string> select_root_individuals(const DomainOntology& o, const DomainSignature& sig,
                                              int radius) {
  std::map<std::string, std::set<std::string>> adj;
  for (const Axiom& a : o.abox) {
    const auto* pa = a.as<PropertyAssertion>();
    if (!pa || !pa->subject.is_individual() || !pa->object.is_individual()) continue;
    adj[pa->subject.text].insert(pa->object.text);
    adj[pa->object.text].insert(pa->subject.text);
  }

  std::set<std::string> result;
  std::deque<std::pair<std::string, int>> queue;
  for (const auto& [role, individual] : sig.bindings) {
    if (result.insert(individual).second) queue.push_back({individual, 0});
  }
  while (!queue.empty()) {
    auto [cur, dist] = queue.front();
    queue.pop_front();
    if (dist >= radius) continue;
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const std::string& next : it->second)
      if (result.insert(next).second) queue.push_back({next, dist + 1});
  }
  return result;
}

namespace {

std::string sanitize_identifier(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
        c == '"' || c == '?') {
      out.push_back('_');
    } else {
      out.push_back(c);
    }
  }
  return out.empty() ? std::string("_") : out;
}

struct IriMapper {
  std::map<std::string, std::string> assigned;
  std::set<std::string> used;

  void preassign(const std::string& iri, const std::string& id) {
    assigned[iri] = id;
    used.insert(id);
  }

  std::string map(const std::string& iri) {
    auto it = assigned.find(iri);
    if (it != assigned.end()) return it->second;
    std::string base = sanitize_identifier(local_name(iri));
    std::string id = base;
    for (int suffix = 2; used.count(id) > 0; ++suffix) id = base + "_" + std::to_string(suffix);
    used.insert(id);
    assigned[iri] = id;
    return id;
  }
};

Datatype datatype_from_iri(const std::string& iri) {
  std::string local = local_name(iri);
  if (local == "float" || local == "double" || local == "decimal") return Datatype::Float;
  return Datatype::String;
}

}  // namespace

EnrichResult enrich(const DomainOntology& o, const TripleSet& kg, const LabelResolver& resolver,
                    const std::set<std::string>& roots, int hops, AmbiguityPolicy policy) {
  EnrichResult result;
  result.ontology = o;
  result.ontology.materialized = false;

  // First pass: resolve every root so entity IRIs map onto root individuals
  // before any other identifier is assigned.
  IriMapper mapper;
  std::vector<std::pair<std::string, std::string>> matched;  // (root, entity IRI)
  for (const std::string& root : roots) {
    std::vector<std::string> candidates = resolver.resolve(root);
    if (candidates.empty()) {
      result.report.push_back({root, "unmatched", ""});
      continue;
    }
    if (candidates.size() > 1 && policy == AmbiguityPolicy::Skip) {
      result.report.push_back({root, "ambiguous", ""});
      continue;
    }
    const std::string& entity = candidates.front();
    result.report.push_back({root, "matched", entity});
    mapper.preassign(entity, root);
    matched.push_back({root, entity});
  }

  // Undirected adjacency over IRI nodes of the dump.
  auto neighbors = [&](const std::string& iri) {
    std::set<std::string> out;
    for (const Triple* t : kg.by_subject(iri))
      if (!t->literal) out.insert(t->object);
    for (const Triple* t : kg.by_object(iri))
      if (!t->literal) out.insert(t->subject);
    return out;
  };

  std::set<Triple> imported;
  for (const auto& [root, entity] : matched) {
    // Interior nodes: within hops-1 of the entity; every triple incident to
    // an interior node gets imported, which is exactly `hops` edge steps out.
    std::set<std::string> interior{entity};
    std::deque<std::pair<std::string, int>> queue{{entity, 0}};
    while (!queue.empty()) {
      auto [cur, dist] = queue.front();
      queue.pop_front();
      if (dist >= hops - 1) continue;
      for (const std::string& next : neighbors(cur))
        if (interior.insert(next).second) queue.push_back({next, dist + 1});
    }
    for (const std::string& node : interior) {
      for (const Triple* t : kg.by_subject(node)) imported.insert(*t);
      for (const Triple* t : kg.by_object(node)) imported.insert(*t);
    }
  }

  for (const Triple& t : imported) {
    if (t.predicate == kRdfType && !t.literal) {
      result.ontology.insert(
          Axiom(ClassAssertion{mapper.map(t.object), Term::individual(mapper.map(t.subject))}));
    } else if (t.predicate == kRdfsSubClassOf && !t.literal) {
      result.ontology.insert(Axiom(SubClassOf{mapper.map(t.subject), mapper.map(t.object)}));
    } else if (t.literal) {
      result.ontology.insert(Axiom(PropertyAssertion{
          mapper.map(t.predicate), Term::individual(mapper.map(t.subject)),
          Term::literal(t.object, datatype_from_iri(t.datatypeIri))}));
    } else {
      result.ontology.insert(Axiom(PropertyAssertion{mapper.map(t.predicate),
                                                     Term::individual(mapper.map(t.subject)),
                                                     Term::individual(mapper.map(t.object))}));
    }
  }
  return result;
}

EnrichResult enrich(const DomainOntology& o, const TripleSet& kg, const LexicalIndex& idx,
                    const std::set<std::string>& roots, int hops, AmbiguityPolicy policy) {
  IndexResolver resolver(idx);
  return enrich(o, kg, resolver, roots, hops, policy);
}

std::string alignment_report_json(const std::vector<AlignmentEntry>& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AlignmentEntry& e : report) {
    nlohmann::json obj{{"root", e.root}, {"status", e.status}};
    obj["entity"] = e.entity.empty() ? nlohmann::json() : nlohmann::json(e.entity);
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

}  // namespace kgx
