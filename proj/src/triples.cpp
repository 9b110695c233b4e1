#include "kgx/triples.h"

#include "kgx/error.h"
#include "kgx/util.h"

namespace kgx {

bool TripleSet::insert(Triple t) {
  if (!seen_.insert(t).second) return false;
  size_t idx = triples_.size();
  subjectIdx_[t.subject].push_back(idx);
  predicateIdx_[t.predicate].push_back(idx);
  objectIdx_[t.object].push_back(idx);
  triples_.push_back(std::move(t));
  return true;
}

std::vector<const Triple*> TripleSet::lookup(const std::map<std::string, std::vector<size_t>>& idx,
                                             const std::string& key) const {
  std::vector<const Triple*> out;
  auto it = idx.find(key);
  if (it == idx.end()) return out;
  out.reserve(it->second.size());
  for (size_t i : it->second) out.push_back(&triples_[i]);
  return out;
}

std::vector<const Triple*> TripleSet::by_subject(const std::string& iri) const {
  return lookup(subjectIdx_, iri);
}
std::vector<const Triple*> TripleSet::by_predicate(const std::string& iri) const {
  return lookup(predicateIdx_, iri);
}
std::vector<const Triple*> TripleSet::by_object(const std::string& key) const {
  return lookup(objectIdx_, key);
}

namespace {

[[noreturn]] void nt_fail(int lineNo, const std::string& msg) {
  fail(Errc::Parse, "line " + std::to_string(lineNo) + ": " + msg);
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int lineNo;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
};

std::string parse_iri(Cursor& c) {
  c.skip_ws();
  if (c.pos >= c.s.size() || c.s[c.pos] != '<') nt_fail(c.lineNo, "expected IRI");
  size_t close = c.s.find('>', c.pos + 1);
  if (close == std::string::npos) nt_fail(c.lineNo, "unterminated IRI");
  std::string iri = c.s.substr(c.pos + 1, close - c.pos - 1);
  if (iri.find("://") == std::string::npos) nt_fail(c.lineNo, "malformed IRI <" + iri + ">");
  c.pos = close + 1;
  return iri;
}

std::string unescape(const std::string& s, int lineNo) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (++i >= s.size()) nt_fail(lineNo, "dangling escape in literal");
    switch (s[i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      default: nt_fail(lineNo, std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

}  // namespace

TripleSet parse_ntriples(const std::string& text) {
  TripleSet out;
  int lineNo = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    Cursor c{line, 0, lineNo};
    Triple t;
    t.subject = parse_iri(c);
    t.predicate = parse_iri(c);

    c.skip_ws();
    if (c.pos >= line.size()) nt_fail(lineNo, "missing object");
    if (line[c.pos] == '<') {
      t.object = parse_iri(c);
    } else if (line[c.pos] == '"') {
      size_t i = c.pos + 1;
      std::string lex;
      bool closed = false;
      for (; i < line.size(); ++i) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          lex.push_back(line[i]);
          lex.push_back(line[++i]);
        } else if (line[i] == '"') {
          closed = true;
          break;
        } else {
          lex.push_back(line[i]);
        }
      }
      if (!closed) nt_fail(lineNo, "unterminated literal");
      t.literal = true;
      t.object = unescape(lex, lineNo);
      c.pos = i + 1;
      if (c.pos + 1 < line.size() && line[c.pos] == '^' && line[c.pos + 1] == '^') {
        c.pos += 2;
        t.datatypeIri = parse_iri(c);
      } else if (c.pos < line.size() && line[c.pos] == '@') {
        // language tag kept out of the lexical form
        while (c.pos < line.size() && !std::isspace(static_cast<unsigned char>(line[c.pos]))) ++c.pos;
      }
    } else {
      nt_fail(lineNo, "expected IRI or literal object");
    }

    c.skip_ws();
    if (c.pos >= line.size() || line[c.pos] != '.') nt_fail(lineNo, "unterminated triple");
    ++c.pos;
    if (!c.done()) nt_fail(lineNo, "trailing content after '.'");
    out.insert(std::move(t));
  }
  return out;
}

std::string local_name(const std::string& iri) {
  size_t pos = iri.find_last_of("#/");
  if (pos == std::string::npos || pos + 1 >= iri.size()) return iri;
  return iri.substr(pos + 1);
}

}  // namespace kgx
