#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgx/axiom.h"

namespace kgx {

// Forward-chaining closure of the ABox under three rules:
//   R1  SUB A B, A(x)                 |- B(x)   (transitive through the SUB graph)
//   R2  CHAIN p q -> r, p(x,y), q(y,z) |- r(x,z)
//   R3  DEF D := B AND SOME p F, B(x), p(x,v) |- D(x)
//       where v is a literal tagged F or an individual asserted F(v)
// Pure: the input is untouched; the result carries materialized = true.
DomainOntology materialize(const DomainOntology& o);

// Membership of an ABox axiom in the materialized closure.
bool entails(const DomainOntology& o, const Axiom& a);

using Binding = std::map<std::string, std::string>;

// Single-pattern query: an ABox axiom whose individual positions may hold
// ?variables. One binding map per matching materialized fact, sorted.
std::vector<Binding> query(const DomainOntology& o, const Axiom& pattern);

}  // namespace kgx
