#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kgx {

enum class Datatype { Float, String };

std::string datatype_name(Datatype dt);
std::optional<Datatype> datatype_from_name(const std::string& name);

// A term in an individual position: a plain individual, a ?role placeholder
// (template files only), or a typed literal written "lexical"^^Float.
struct Term {
  enum class Kind { Individual, Role, Literal };

  Kind kind = Kind::Individual;
  std::string text;
  Datatype datatype = Datatype::String;  // literals only

  static Term individual(std::string id) { return {Kind::Individual, std::move(id), Datatype::String}; }
  static Term role(std::string name) { return {Kind::Role, std::move(name), Datatype::String}; }
  static Term literal(std::string lexical, Datatype dt) { return {Kind::Literal, std::move(lexical), dt}; }

  bool is_individual() const { return kind == Kind::Individual; }
  bool is_role() const { return kind == Kind::Role; }
  bool is_literal() const { return kind == Kind::Literal; }

  // The term as written in the file grammar.
  std::string text_form() const;

  friend bool operator==(const Term&, const Term&) = default;
};

struct ClassAssertion {
  std::string conceptName;
  Term individual;
};
struct PropertyAssertion {
  std::string property;
  Term subject;
  Term object;
};
struct SubClassOf {
  std::string sub;
  std::string super;
};
struct PropertyChain {
  std::string first;
  std::string second;
  std::string result;
};
// Encodes exactly `Base AND SOME property Filler SUBSUMED-BY Defined`.
struct ConceptDefinition {
  std::string defined;
  std::string base;
  std::string property;
  std::string filler;
};

class Axiom {
 public:
  using Node = std::variant<ClassAssertion, PropertyAssertion, SubClassOf, PropertyChain, ConceptDefinition>;

  explicit Axiom(Node node);

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

  bool is_tbox() const;
  bool is_ground() const;  // no role placeholders

  // Canonical grammar line; also the comparison key, so equal text means
  // equal axiom.
  const std::string& text() const { return text_; }

  friend bool operator==(const Axiom& a, const Axiom& b) { return a.text_ == b.text_; }
  friend bool operator<(const Axiom& a, const Axiom& b) { return a.text_ < b.text_; }

 private:
  Node node_;
  std::string text_;
};

// Same shape as Axiom; role placeholders allowed in individual positions.
using AxiomTemplate = Axiom;

struct DomainOntology {
  std::string id;
  std::set<Axiom> tbox;
  std::set<Axiom> abox;
  bool materialized = false;

  // Routes the axiom to tbox or abox by variant; returns false on duplicate.
  bool insert(Axiom a);

  friend bool operator==(const DomainOntology& a, const DomainOntology& b) {
    return a.id == b.id && a.tbox == b.tbox && a.abox == b.abox;
  }
};

struct DomainSignature {
  std::string domainId;
  std::map<std::string, std::string> bindings;  // role -> individual
};

struct AxiomParse {
  std::set<Axiom> tbox;
  std::set<Axiom> abox;
  std::vector<std::string> warnings;
};

// One statement per line, `#` comments. Grammar:
//   Concept(individual)
//   property(subject, object)
//   property(subject, "lexical"^^Float)
//   SUB Sub Super
//   CHAIN p q -> r
//   DEF Defined := Base AND SOME property Filler
// Roles are written ?role in template files.
Axiom parse_axiom_line(const std::string& line, int lineNo = 0);
AxiomParse parse_axiom_file(const std::string& text);
DomainOntology parse_ontology(std::string id, const std::string& text);

// Lines sorted lexicographically; parse(serialize(o)) == o.
std::string serialize_ontology(const DomainOntology& o);

// Replaces every role placeholder with its binding. Unbound role -> error
// naming the role. Ground axioms come back unchanged.
Axiom ground_template(const AxiomTemplate& t, const DomainSignature& sig);

// Signature file: one line per domain, `domain <id> <role>=<individual> ...`
std::vector<DomainSignature> parse_signature_file(const std::string& text);
std::string serialize_signatures(const std::vector<DomainSignature>& sigs);

}  // namespace kgx
