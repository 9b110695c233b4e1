#include "kgx/reasoner.h"

#include <algorithm>
#include <deque>

#include "kgx/error.h"

namespace kgx {

namespace {

std::string term_key(const Term& t) { return t.text_form(); }

struct ChainRule {
  std::string first, second, result;
};
struct DefRule {
  std::string defined, base, property, filler;
};

// Materialization working state; indexes cover exactly what R1-R3 join on.
struct Engine {
  std::map<std::string, std::set<std::string>> superClosure;  // concept -> all supers
  std::vector<ChainRule> chains;
  std::vector<DefRule> defs;

  std::set<Axiom> facts;
  std::deque<Axiom> work;

  // class facts: concept -> individuals; individual -> concepts
  std::map<std::string, std::set<std::string>> conceptMembers;
  std::map<std::string, std::set<std::string>> memberConcepts;
  // property facts keyed both ways for chain joins
  std::map<std::pair<std::string, std::string>, std::vector<Term>> propBySubject;  // (p, subj) -> objs
  std::map<std::pair<std::string, std::string>, std::vector<Term>> propByObject;   // (p, obj) -> subjs

  void add(Axiom a) {
    if (!facts.insert(a).second) return;
    if (const auto* ca = a.as<ClassAssertion>()) {
      conceptMembers[ca->conceptName].insert(ca->individual.text);
      memberConcepts[ca->individual.text].insert(ca->conceptName);
    } else if (const auto* pa = a.as<PropertyAssertion>()) {
      propBySubject[{pa->property, term_key(pa->subject)}].push_back(pa->object);
      propByObject[{pa->property, term_key(pa->object)}].push_back(pa->subject);
    }
    work.push_back(std::move(a));
  }

  bool filler_matches(const DefRule& def, const Term& value) const {
    if (value.is_literal()) return datatype_name(value.datatype) == def.filler;
    auto it = memberConcepts.find(value.text);
    return it != memberConcepts.end() && it->second.count(def.filler) > 0;
  }

  void fire_def_on_pair(const DefRule& def, const std::string& subject, const Term& value) {
    auto mc = memberConcepts.find(subject);
    if (mc == memberConcepts.end() || mc->second.count(def.base) == 0) return;
    if (!filler_matches(def, value)) return;
    add(Axiom(ClassAssertion{def.defined, Term::individual(subject)}));
  }

  void on_class_fact(const ClassAssertion& ca) {
    // R1: push through the precomputed SUB closure
    auto sc = superClosure.find(ca.conceptName);
    if (sc != superClosure.end()) {
      for (const std::string& super : sc->second)
        add(Axiom(ClassAssertion{super, ca.individual}));
    }
    // R3 with the new fact as B(x)
    for (const DefRule& def : defs) {
      if (def.base != ca.conceptName) continue;
      auto ps = propBySubject.find({def.property, ca.individual.text});
      if (ps == propBySubject.end()) continue;
      for (const Term& value : ps->second)
        if (filler_matches(def, value))
          add(Axiom(ClassAssertion{def.defined, ca.individual}));
    }
    // R3 with the new fact as F(v)
    for (const DefRule& def : defs) {
      if (def.filler != ca.conceptName) continue;
      auto po = propByObject.find({def.property, term_key(ca.individual)});
      if (po == propByObject.end()) continue;
      for (const Term& subject : po->second)
        fire_def_on_pair(def, subject.text, ca.individual);
    }
  }

  void on_prop_fact(const PropertyAssertion& pa) {
    // R2 with the new fact on either side of the chain
    for (const ChainRule& chain : chains) {
      if (chain.first == pa.property) {
        auto ps = propBySubject.find({chain.second, term_key(pa.object)});
        if (ps != propBySubject.end())
          for (const Term& z : ps->second)
            add(Axiom(PropertyAssertion{chain.result, pa.subject, z}));
      }
      if (chain.second == pa.property) {
        auto po = propByObject.find({chain.first, term_key(pa.subject)});
        if (po != propByObject.end())
          for (const Term& x : po->second)
            add(Axiom(PropertyAssertion{chain.result, x, pa.object}));
      }
    }
    // R3 with the new fact as p(x, v)
    for (const DefRule& def : defs) {
      if (def.property != pa.property) continue;
      fire_def_on_pair(def, pa.subject.text, pa.object);
    }
  }

  void run() {
    while (!work.empty()) {
      Axiom a = std::move(work.front());
      work.pop_front();
      if (const auto* ca = a.as<ClassAssertion>()) on_class_fact(*ca);
      else if (const auto* pa = a.as<PropertyAssertion>()) on_prop_fact(*pa);
    }
  }
};

std::map<std::string, std::set<std::string>> subclass_closure(const std::set<Axiom>& tbox) {
  std::map<std::string, std::set<std::string>> direct;
  for (const Axiom& a : tbox)
    if (const auto* sub = a.as<SubClassOf>()) direct[sub->sub].insert(sub->super);

  std::map<std::string, std::set<std::string>> closure;
  for (const auto& [start, _] : direct) {
    std::set<std::string>& reach = closure[start];
    std::deque<std::string> queue{start};
    std::set<std::string> visited{start};
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      auto it = direct.find(cur);
      if (it == direct.end()) continue;
      for (const std::string& super : it->second) {
        reach.insert(super);
        if (visited.insert(super).second) queue.push_back(super);
      }
    }
    reach.erase(start);  // cycles would otherwise make a concept its own super
  }
  return closure;
}

}  // namespace

DomainOntology materialize(const DomainOntology& o) {
  Engine engine;
  engine.superClosure = subclass_closure(o.tbox);
  for (const Axiom& a : o.tbox) {
    if (const auto* ch = a.as<PropertyChain>())
      engine.chains.push_back({ch->first, ch->second, ch->result});
    else if (const auto* def = a.as<ConceptDefinition>())
      engine.defs.push_back({def->defined, def->base, def->property, def->filler});
  }
  for (const Axiom& a : o.abox) engine.add(a);
  engine.run();

  DomainOntology out;
  out.id = o.id;
  out.tbox = o.tbox;
  out.abox = std::move(engine.facts);
  out.materialized = true;
  return out;
}

bool entails(const DomainOntology& o, const Axiom& a) {
  if (!o.materialized) fail(Errc::NotMaterialized, "materialize first");
  if (a.is_tbox()) fail(Errc::BadInput, "entails expects an ABox axiom, got: " + a.text());
  return o.abox.count(a) > 0;
}

namespace {

bool unify_term(const Term& pattern, const Term& fact, Binding& binding) {
  if (!pattern.is_role()) return pattern == fact;
  if (fact.is_role()) return false;
  std::string value = fact.is_literal() ? fact.text_form() : fact.text;
  auto [it, inserted] = binding.emplace(pattern.text, value);
  return inserted || it->second == value;
}

}  // namespace

std::vector<Binding> query(const DomainOntology& o, const Axiom& pattern) {
  if (!o.materialized) fail(Errc::NotMaterialized, "materialize first");
  std::vector<Binding> out;
  for (const Axiom& fact : o.abox) {
    Binding binding;
    if (const auto* cp = pattern.as<ClassAssertion>()) {
      const auto* cf = fact.as<ClassAssertion>();
      if (!cf || cf->conceptName != cp->conceptName) continue;
      if (!unify_term(cp->individual, cf->individual, binding)) continue;
    } else if (const auto* pp = pattern.as<PropertyAssertion>()) {
      const auto* pf = fact.as<PropertyAssertion>();
      if (!pf || pf->property != pp->property) continue;
      if (!unify_term(pp->subject, pf->subject, binding)) continue;
      if (!unify_term(pp->object, pf->object, binding)) continue;
    } else {
      fail(Errc::BadInput, "query expects an ABox pattern, got: " + pattern.text());
    }
    out.push_back(std::move(binding));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kgx
