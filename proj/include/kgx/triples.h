#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace kgx {

struct Triple {
  std::string subject;    // IRI
  std::string predicate;  // IRI
  std::string object;     // IRI, or lexical form when literal
  bool literal = false;
  std::string datatypeIri;  // literals only, may be empty

  auto key() const { return std::tie(subject, predicate, object, literal, datatypeIri); }
  friend bool operator==(const Triple& a, const Triple& b) { return a.key() == b.key(); }
  friend bool operator<(const Triple& a, const Triple& b) { return a.key() < b.key(); }
};

// Duplicate-free triple collection with subject/predicate/object indexes.
class TripleSet {
 public:
  bool insert(Triple t);
  bool contains(const Triple& t) const { return seen_.count(t) > 0; }
  size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::vector<Triple>& triples() const { return triples_; }

  std::vector<const Triple*> by_subject(const std::string& iri) const;
  std::vector<const Triple*> by_predicate(const std::string& iri) const;
  // Object key is the IRI or the literal lexical form.
  std::vector<const Triple*> by_object(const std::string& key) const;

 private:
  std::vector<const Triple*> lookup(const std::map<std::string, std::vector<size_t>>& idx,
                                    const std::string& key) const;

  std::vector<Triple> triples_;
  std::set<Triple> seen_;
  std::map<std::string, std::vector<size_t>> subjectIdx_;
  std::map<std::string, std::vector<size_t>> predicateIdx_;
  std::map<std::string, std::vector<size_t>> objectIdx_;
};

// N-Triples subset: `<s> <p> <o> .` per line, literal objects as
// "lexical"(^^<datatype>)?(@lang)?, blank lines and # comments skipped.
TripleSet parse_ntriples(const std::string& text);

// Fragment after the last '#' or '/' of an IRI.
std::string local_name(const std::string& iri);

}  // namespace kgx
