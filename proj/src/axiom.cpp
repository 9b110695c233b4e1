#include "kgx/axiom.h"

#include <sstream>

#include "kgx/error.h"
#include "kgx/util.h"

namespace kgx {

std::string datatype_name(Datatype dt) { return dt == Datatype::Float ? "Float" : "String"; }

std::optional<Datatype> datatype_from_name(const std::string& name) {
  if (name == "Float") return Datatype::Float;
  if (name == "String") return Datatype::String;
  return std::nullopt;
}

std::string Term::text_form() const {
  switch (kind) {
    case Kind::Individual:
      return text;
    case Kind::Role:
      return "?" + text;
    case Kind::Literal:
      return "\"" + text + "\"^^" + datatype_name(datatype);
  }
  return text;
}

namespace {

std::string render(const Axiom::Node& node) {
  struct Visitor {
    std::string operator()(const ClassAssertion& a) const {
      return a.conceptName + "(" + a.individual.text_form() + ")";
    }
    std::string operator()(const PropertyAssertion& a) const {
      return a.property + "(" + a.subject.text_form() + ", " + a.object.text_form() + ")";
    }
    std::string operator()(const SubClassOf& a) const { return "SUB " + a.sub + " " + a.super; }
    std::string operator()(const PropertyChain& a) const {
      return "CHAIN " + a.first + " " + a.second + " -> " + a.result;
    }
    std::string operator()(const ConceptDefinition& a) const {
      return "DEF " + a.defined + " := " + a.base + " AND SOME " + a.property + " " + a.filler;
    }
  };
  return std::visit(Visitor{}, node);
}

[[noreturn]] void parse_fail(int lineNo, const std::string& msg) {
  fail(Errc::Parse, "line " + std::to_string(lineNo) + ": " + msg);
}

void check_identifier(const std::string& s, int lineNo) {
  if (s.empty()) parse_fail(lineNo, "empty identifier");
  for (char c : s) {
    if (c == '(' || c == ')') parse_fail(lineNo, "parenthesis in identifier '" + s + "'");
    if (c == ',' || c == '"' || c == '?') parse_fail(lineNo, "bad character in identifier '" + s + "'");
    if (std::isspace(static_cast<unsigned char>(c))) parse_fail(lineNo, "whitespace in identifier '" + s + "'");
  }
}

Term parse_term(const std::string& raw, int lineNo, bool literalAllowed) {
  std::string s = trim(raw);
  if (s.empty()) parse_fail(lineNo, "empty term");
  if (s[0] == '?') {
    std::string role = s.substr(1);
    check_identifier(role, lineNo);
    return Term::role(role);
  }
  if (s[0] == '"') {
    if (!literalAllowed) parse_fail(lineNo, "literal not allowed here: " + s);
    size_t close = s.find('"', 1);
    if (close == std::string::npos) parse_fail(lineNo, "unterminated literal: " + s);
    std::string lexical = s.substr(1, close - 1);
    std::string rest = s.substr(close + 1);
    if (rest.rfind("^^", 0) != 0) parse_fail(lineNo, "literal missing ^^datatype tag: " + s);
    std::string tag = rest.substr(2);
    auto dt = datatype_from_name(tag);
    if (!dt) parse_fail(lineNo, "unknown datatype tag '" + tag + "'");
    return Term::literal(lexical, *dt);
  }
  check_identifier(s, lineNo);
  return Term::individual(s);
}

Axiom parse_functional(const std::string& line, int lineNo) {
  size_t open = line.find('(');
  if (line.back() != ')') parse_fail(lineNo, "unbalanced parenthesis");
  std::string name = trim(line.substr(0, open));
  check_identifier(name, lineNo);
  std::string inner = line.substr(open + 1, line.size() - open - 2);
  if (inner.find('(') != std::string::npos || inner.find(')') != std::string::npos)
    parse_fail(lineNo, "unbalanced parenthesis");

  // Split on commas outside quotes.
  std::vector<std::string> args;
  std::string cur;
  bool quoted = false;
  for (char c : inner) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      args.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  args.push_back(cur);

  if (args.size() == 1) {
    return Axiom(ClassAssertion{name, parse_term(args[0], lineNo, false)});
  }
  if (args.size() == 2) {
    Term subject = parse_term(args[0], lineNo, false);
    Term object = parse_term(args[1], lineNo, true);
    return Axiom(PropertyAssertion{name, subject, object});
  }
  parse_fail(lineNo, "expected 1 or 2 arguments, got " + std::to_string(args.size()));
}

}  // namespace

Axiom::Axiom(Node node) : node_(std::move(node)), text_(render(node_)) {}

bool Axiom::is_tbox() const {
  return std::holds_alternative<SubClassOf>(node_) || std::holds_alternative<PropertyChain>(node_) ||
         std::holds_alternative<ConceptDefinition>(node_);
}

bool Axiom::is_ground() const {
  if (const auto* ca = as<ClassAssertion>()) return !ca->individual.is_role();
  if (const auto* pa = as<PropertyAssertion>()) return !pa->subject.is_role() && !pa->object.is_role();
  return true;
}

bool DomainOntology::insert(Axiom a) {
  return (a.is_tbox() ? tbox : abox).insert(std::move(a)).second;
}

Axiom parse_axiom_line(const std::string& raw, int lineNo) {
  std::string line = trim(raw);
  if (line.empty()) parse_fail(lineNo, "empty statement");

  std::vector<std::string> toks = split_ws(line);
  if (toks[0] == "SUB") {
    if (toks.size() != 3) parse_fail(lineNo, "SUB expects 'SUB Sub Super'");
    check_identifier(toks[1], lineNo);
    check_identifier(toks[2], lineNo);
    return Axiom(SubClassOf{toks[1], toks[2]});
  }
  if (toks[0] == "CHAIN") {
    if (toks.size() != 5 || toks[3] != "->") parse_fail(lineNo, "CHAIN expects 'CHAIN p q -> r'");
    check_identifier(toks[1], lineNo);
    check_identifier(toks[2], lineNo);
    check_identifier(toks[4], lineNo);
    return Axiom(PropertyChain{toks[1], toks[2], toks[4]});
  }
  if (toks[0] == "DEF") {
    if (toks.size() != 8 || toks[2] != ":=" || toks[4] != "AND" || toks[5] != "SOME")
      parse_fail(lineNo, "DEF expects 'DEF Defined := Base AND SOME property Filler'");
    check_identifier(toks[1], lineNo);
    check_identifier(toks[3], lineNo);
    check_identifier(toks[6], lineNo);
    check_identifier(toks[7], lineNo);
    return Axiom(ConceptDefinition{toks[1], toks[3], toks[6], toks[7]});
  }
  if (line.find('(') != std::string::npos) return parse_functional(line, lineNo);
  parse_fail(lineNo, "unrecognized statement '" + toks[0] + "'");
}

AxiomParse parse_axiom_file(const std::string& text) {
  AxiomParse out;
  int lineNo = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    Axiom a = parse_axiom_line(line, lineNo);
    auto& dst = a.is_tbox() ? out.tbox : out.abox;
    if (!dst.insert(std::move(a)).second)
      out.warnings.push_back("line " + std::to_string(lineNo) + ": duplicate axiom collapsed: " + line);
  }
  return out;
}

DomainOntology parse_ontology(std::string id, const std::string& text) {
  AxiomParse p = parse_axiom_file(text);
  DomainOntology o;
  o.id = std::move(id);
  o.tbox = std::move(p.tbox);
  o.abox = std::move(p.abox);
  return o;
}

std::string serialize_ontology(const DomainOntology& o) {
  std::set<std::string> lines;
  for (const Axiom& a : o.tbox) lines.insert(a.text());
  for (const Axiom& a : o.abox) lines.insert(a.text());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

Axiom ground_template(const AxiomTemplate& t, const DomainSignature& sig) {
  auto groundTerm = [&](const Term& term) -> Term {
    if (!term.is_role()) return term;
    auto it = sig.bindings.find(term.text);
    if (it == sig.bindings.end())
      fail(Errc::UnboundRole, "role '" + term.text + "' has no binding in domain " + sig.domainId);
    return Term::individual(it->second);
  };
  if (const auto* ca = t.as<ClassAssertion>())
    return Axiom(ClassAssertion{ca->conceptName, groundTerm(ca->individual)});
  if (const auto* pa = t.as<PropertyAssertion>())
    return Axiom(PropertyAssertion{pa->property, groundTerm(pa->subject), groundTerm(pa->object)});
  return t;  // TBox axioms carry no individual positions
}

std::vector<DomainSignature> parse_signature_file(const std::string& text) {
  std::vector<DomainSignature> out;
  int lineNo = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.size() < 2 || toks[0] != "domain")
      parse_fail(lineNo, "expected 'domain <id> <role>=<individual> ...'");
    DomainSignature sig;
    sig.domainId = toks[1];
    for (size_t i = 2; i < toks.size(); ++i) {
      size_t eq = toks[i].find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == toks[i].size())
        parse_fail(lineNo, "bad binding '" + toks[i] + "'");
      std::string role = toks[i].substr(0, eq);
      std::string individual = toks[i].substr(eq + 1);
      if (!sig.bindings.emplace(role, individual).second)
        parse_fail(lineNo, "duplicate role '" + role + "'");
    }
    out.push_back(std::move(sig));
  }
  return out;
}

std::string serialize_signatures(const std::vector<DomainSignature>& sigs) {
  std::string out;
  for (const DomainSignature& sig : sigs) {
    out += "domain " + sig.domainId;
    for (const auto& [role, individual] : sig.bindings) out += " " + role + "=" + individual;
    out += '\n';
  }
  return out;
}

}  // namespace kgx
