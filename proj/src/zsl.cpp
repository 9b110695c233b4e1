#include "kgx/zsl.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "kgx/error.h"
#include "kgx/rng.h"
#include "kgx/util.h"

namespace kgx {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

int ClassGraph::node_of(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) fail(Errc::BadInput, "unknown graph node '" + id + "'");
  return it->second;
}

std::vector<std::set<int>> ClassGraph::adjacency() const {
  std::vector<std::set<int>> adj(nodes.size());
  for (const auto& [a, b] : subclassEdges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  for (const auto& [a, b] : propertyEdges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  return adj;
}

namespace {

struct NodeNamer {
  std::map<std::string, std::string> byIri;
  std::set<std::string> used;

  std::string name_for(const std::string& iri) {
    auto it = byIri.find(iri);
    if (it != byIri.end()) return it->second;
    std::string base = local_name(iri);
    std::string id = base;
    for (int suffix = 2; used.count(id) > 0; ++suffix) id = base + "_" + std::to_string(suffix);
    used.insert(id);
    byIri[iri] = id;
    return id;
  }
};

std::string resolve_class(const std::string& spec, const LexicalIndex& idx, const char* kind) {
  if (spec.find("://") != std::string::npos) return spec;
  std::vector<std::string> matches = match_label(idx, spec);
  if (matches.empty()) fail(Errc::BadInput, std::string(kind) + " class '" + spec + "' matches no KG entity");
  return matches.front();
}

}  // namespace

ClassGraph build_class_graph(const TripleSet& kg, const ClassGraphConfig& config) {
  LexicalIndex idx = build_lexical_index(kg, config.labelPredicates);
  ClassGraph g;
  NodeNamer namer;

  auto add_class_node = [&](const std::string& iri) {
    std::string id = namer.name_for(iri);
    if (g.index.count(id)) return id;
    g.index[id] = static_cast<int>(g.nodes.size());
    g.nodes.push_back({id, iri, false, {}});
    return id;
  };

  std::vector<std::string> classIris;
  for (const std::string& spec : config.seen) {
    std::string iri = resolve_class(spec, idx, "seen");
    g.seen.insert(add_class_node(iri));
    classIris.push_back(iri);
  }
  for (const std::string& spec : config.unseen) {
    std::string iri = resolve_class(spec, idx, "unseen");
    std::string id = add_class_node(iri);
    if (g.seen.count(id)) fail(Errc::BadInput, "class '" + id + "' listed as both seen and unseen");
    g.unseen.insert(id);
    classIris.push_back(iri);
  }

  // Hierarchy closure upward from the listed classes.
  std::deque<std::string> queue(classIris.begin(), classIris.end());
  std::set<std::string> visited(classIris.begin(), classIris.end());
  while (!queue.empty()) {
    std::string iri = queue.front();
    queue.pop_front();
    for (const Triple* t : kg.by_subject(iri)) {
      if (t->predicate != config.hierarchyPredicate || t->literal) continue;
      add_class_node(t->object);
      if (visited.insert(t->object).second) queue.push_back(t->object);
    }
  }

  std::set<std::pair<int, int>> subclassSeen;
  for (const ClassGraph::Node& node : std::vector<ClassGraph::Node>(g.nodes)) {
    for (const Triple* t : kg.by_subject(node.iri)) {
      if (t->predicate != config.hierarchyPredicate || t->literal) continue;
      auto parent = namer.byIri.find(t->object);
      if (parent == namer.byIri.end()) continue;
      int child = g.node_of(node.id);
      int par = g.node_of(parent->second);
      if (subclassSeen.insert({child, par}).second) g.subclassEdges.push_back({child, par});
    }
  }

  // Property values become anonymous entities shared across classes.
  std::set<std::pair<int, int>> propertySeen;
  size_t classCount = g.nodes.size();
  for (size_t i = 0; i < classCount; ++i) {
    const std::string iri = g.nodes[i].iri;
    for (const std::string& pred : config.propertyPredicates) {
      for (const Triple* t : kg.by_subject(iri)) {
        if (t->predicate != pred) continue;
        AnonymousEntity anon{local_name(pred), t->literal ? t->object : local_name(t->object)};
        std::string anonId = anon.property + "=" + anon.value;
        auto it = g.index.find(anonId);
        int anonIdx;
        if (it == g.index.end()) {
          anonIdx = static_cast<int>(g.nodes.size());
          g.index[anonId] = anonIdx;
          g.nodes.push_back({anonId, "", true, anon});
        } else {
          anonIdx = it->second;
        }
        if (propertySeen.insert({static_cast<int>(i), anonIdx}).second)
          g.propertyEdges.push_back({static_cast<int>(i), anonIdx});
      }
    }
  }

  // Features: file rows `id v1 v2 ...`, or seeded uniform +-1/sqrt(dim).
  if (config.featureSource.kind == FeatureSource::Kind::File) {
    std::string text = read_file(config.featureSource.path);
    int lineNo = 0;
    for (const std::string& raw : split(text, '\n')) {
      ++lineNo;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> toks = split_ws(line);
      std::string id = toks[0];
      std::vector<double> vec;
      for (size_t i = 1; i < toks.size(); ++i) vec.push_back(std::stod(toks[i]));
      if (g.featureDim == 0) g.featureDim = static_cast<int>(vec.size());
      if (static_cast<int>(vec.size()) != g.featureDim)
        fail(Errc::BadInput, "feature file line " + std::to_string(lineNo) + ": dimension mismatch");
      g.features[id] = std::move(vec);
    }
    for (const ClassGraph::Node& node : g.nodes)
      if (!g.features.count(node.id))
        fail(Errc::BadInput, "feature file missing node '" + node.id + "'");
  } else {
    g.featureDim = config.featureSource.dim;
    double range = 1.0 / std::sqrt(static_cast<double>(g.featureDim));
    Rng rng(config.featureSource.seed);
    std::vector<std::string> ids;
    for (const ClassGraph::Node& node : g.nodes) ids.push_back(node.id);
    std::sort(ids.begin(), ids.end());
    for (const std::string& id : ids) {
      std::vector<double> vec(g.featureDim);
      for (double& x : vec) x = (2.0 * rng.uniform() - 1.0) * range;
      g.features[id] = std::move(vec);
    }
  }
  return g;
}

GatParams parse_gat_params(const std::string& text) {
  std::istringstream in(text);
  GatParams p;
  std::string tag;
  while (in >> tag) {
    if (tag == "W") {
      int rows, cols;
      if (!(in >> rows >> cols)) fail(Errc::Parse, "params: bad W header");
      p.weight = Mat(rows, cols);
      for (double& x : p.weight.v)
        if (!(in >> x)) fail(Errc::Parse, "params: W needs " + std::to_string(rows * cols) + " values");
    } else if (tag == "a") {
      int len;
      if (!(in >> len)) fail(Errc::Parse, "params: bad a header");
      p.attention.assign(len, 0.0);
      for (double& x : p.attention)
        if (!(in >> x)) fail(Errc::Parse, "params: a needs " + std::to_string(len) + " values");
    } else if (tag == "slope") {
      if (!(in >> p.leakySlope)) fail(Errc::Parse, "params: bad slope");
    } else {
      fail(Errc::Parse, "params: unknown section '" + tag + "'");
    }
  }
  if (p.weight.rows == 0) fail(Errc::Parse, "params: missing W");
  if (p.attention.empty()) fail(Errc::Parse, "params: missing a");
  return p;
}

std::string serialize_gat_params(const GatParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "W " << p.weight.rows << " " << p.weight.cols << "\n";
  for (int r = 0; r < p.weight.rows; ++r) {
    for (int c = 0; c < p.weight.cols; ++c) out << (c ? " " : "") << p.weight.at(r, c);
    out << "\n";
  }
  out << "a " << p.attention.size() << "\n";
  for (size_t i = 0; i < p.attention.size(); ++i) out << (i ? " " : "") << p.attention[i];
  out << "\nslope " << p.leakySlope << "\n";
  return out.str();
}

GatParams random_gat_params(int featureDim, uint64_t seed) {
  Rng rng(seed);
  double range = 1.0 / std::sqrt(static_cast<double>(featureDim));
  GatParams p;
  p.weight = Mat(featureDim, featureDim);
  for (double& x : p.weight.v) x = (2.0 * rng.uniform() - 1.0) * range;
  p.attention.assign(2 * featureDim, 0.0);
  for (double& x : p.attention) x = (2.0 * rng.uniform() - 1.0) * range;
  return p;
}

GatResult gat_attention(const ClassGraph& g, const GatParams& params) {
  int fOut = params.weight.rows;
  if (params.weight.cols != g.featureDim)
    fail(Errc::BadInput, "weight matrix expects feature dimension " +
                             std::to_string(params.weight.cols) + ", graph has " +
                             std::to_string(g.featureDim));
  if (static_cast<int>(params.attention.size()) != 2 * fOut)
    fail(Errc::BadInput, "attention vector must have length 2 x " + std::to_string(fOut));

  size_t n = g.nodes.size();
  std::vector<std::vector<double>> transformed(n, std::vector<double>(fOut, 0.0));
  std::vector<double> selfLogit(n, 0.0), neighborLogit(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const std::vector<double>& h = g.features.at(g.nodes[i].id);
    for (int r = 0; r < fOut; ++r) {
      double sum = 0.0;
      for (int c = 0; c < g.featureDim; ++c) sum += params.weight.at(r, c) * h[c];
      transformed[i][r] = sum;
      selfLogit[i] += params.attention[r] * sum;
      neighborLogit[i] += params.attention[fOut + r] * sum;
    }
  }

  auto leaky = [&](double x) { return x >= 0.0 ? x : params.leakySlope * x; };

  std::vector<std::set<int>> adj = g.adjacency();
  GatResult result;
  for (size_t i = 0; i < n; ++i) {
    std::vector<int> hood(adj[i].begin(), adj[i].end());
    hood.push_back(static_cast<int>(i));  // self loop
    std::sort(hood.begin(), hood.end());
    hood.erase(std::unique(hood.begin(), hood.end()), hood.end());

    std::vector<double> logits;
    double maxLogit = -std::numeric_limits<double>::infinity();
    for (int j : hood) {
      double e = leaky(selfLogit[i] + neighborLogit[j]);
      logits.push_back(e);
      maxLogit = std::max(maxLogit, e);
    }
    std::vector<double> expTerms;
    for (double e : logits) expTerms.push_back(std::exp(e - maxLogit));
    // Denominator summed in value order: the result depends only on the
    // multiset of logits, so node relabeling cannot perturb it.
    std::vector<double> sortedTerms = expTerms;
    std::sort(sortedTerms.begin(), sortedTerms.end());
    double denom = 0.0;
    for (double t : sortedTerms) denom += t;

    auto& row = result.attention.rows[g.nodes[i].id];
    std::vector<double> updated(fOut, 0.0);
    for (size_t k = 0; k < hood.size(); ++k) {
      double alpha = expTerms[k] / denom;
      row[g.nodes[hood[k]].id] = alpha;
      for (int r = 0; r < fOut; ++r) updated[r] += alpha * transformed[hood[k]][r];
    }
    result.features[g.nodes[i].id] = std::move(updated);
  }
  return result;
}

AttentionMap parse_attention_file(const std::string& text, const ClassGraph& g) {
  AttentionMap att;
  int lineNo = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.size() != 3)
      fail(Errc::Parse, "attention file line " + std::to_string(lineNo) +
                            ": expected 'unseen seen weight'");
    if (!g.index.count(toks[0]))
      fail(Errc::BadInput, "attention file references unknown node '" + toks[0] + "'");
    if (!g.index.count(toks[1]))
      fail(Errc::BadInput, "attention file references unknown node '" + toks[1] + "'");
    double w = std::stod(toks[2]);
    if (w < 0) fail(Errc::BadInput, "attention file line " + std::to_string(lineNo) + ": negative weight");
    att.rows[toks[0]][toks[1]] = w;
  }
  for (auto& [node, row] : att.rows) {
    double sum = 0.0;
    for (const auto& [_, w] : row) sum += w;
    if (sum <= 0.0) fail(Errc::BadInput, "attention row for '" + node + "' sums to zero");
    for (auto& [_, w] : row) w /= sum;
  }
  return att;
}

AttentionMap multi_hop_attention(const AttentionMap& att, const ClassGraph& g, int depth) {
  AttentionMap out;
  for (const auto& [start, _] : att.rows) {
    std::map<std::string, double> current{{start, 1.0}};
    std::map<std::string, double> reach;
    for (int step = 0; step < depth; ++step) {
      std::map<std::string, double> next;
      for (const auto& [node, mass] : current) {
        auto row = att.rows.find(node);
        if (row == att.rows.end()) continue;
        for (const auto& [neighbor, alpha] : row->second) {
          if (neighbor == start) continue;
          next[neighbor] += mass * alpha;
          reach[neighbor] += mass * alpha;
        }
      }
      current = std::move(next);
    }
    double total = 0.0;
    for (const auto& [_, w] : reach) total += w;
    if (total <= 0.0) continue;
    for (auto& [_, w] : reach) w /= total;
    out.rows[start] = std::move(reach);
  }
  return out;
}

std::vector<std::pair<std::string, double>> select_impressive(const AttentionMap& att,
                                                              const std::string& unseen,
                                                              const std::set<std::string>& seen,
                                                              int k) {
  auto row = att.rows.find(unseen);
  if (row == att.rows.end()) fail(Errc::BadInput, "no attention row for node '" + unseen + "'");
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [node, weight] : row->second)
    if (seen.count(node)) ranked.push_back({node, weight});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (k < static_cast<int>(ranked.size())) ranked.resize(std::max(k, 0));
  return ranked;
}

namespace {

std::map<int, int> ancestor_distances(const ClassGraph& g, int start) {
  std::map<int, std::vector<int>> parents;
  for (const auto& [child, parent] : g.subclassEdges) parents[child].push_back(parent);
  std::map<int, int> dist{{start, 0}};
  std::deque<int> queue{start};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    auto it = parents.find(cur);
    if (it == parents.end()) continue;
    for (int p : it->second)
      if (dist.emplace(p, dist[cur] + 1).second) queue.push_back(p);
  }
  return dist;
}

void require_class_node(const ClassGraph& g, int idx) {
  if (g.nodes[idx].anonymous)
    fail(Errc::BadInput, "'" + g.nodes[idx].id + "' is an anonymous entity, not a class");
}

}  // namespace

std::set<std::string> common_ancestors(const ClassGraph& g, const std::string& a,
                                       const std::string& b) {
  int na = g.node_of(a);
  int nb = g.node_of(b);
  require_class_node(g, na);
  require_class_node(g, nb);
  std::map<int, int> da = ancestor_distances(g, na);
  std::map<int, int> db = ancestor_distances(g, nb);
  int best = std::numeric_limits<int>::max();
  std::set<std::string> out;
  for (const auto& [node, distA] : da) {
    auto it = db.find(node);
    if (it == db.end()) continue;
    int score = std::max(distA, it->second);
    if (score < best) {
      best = score;
      out.clear();
    }
    if (score == best) out.insert(g.nodes[node].id);
  }
  return out;
}

std::vector<AnonymousEntity> shared_properties(const ClassGraph& g, const std::string& a,
                                               const std::string& b) {
  int na = g.node_of(a);
  int nb = g.node_of(b);
  require_class_node(g, na);
  require_class_node(g, nb);
  std::set<int> ofA, ofB;
  for (const auto& [cls, anon] : g.propertyEdges) {
    if (cls == na) ofA.insert(anon);
    if (cls == nb) ofB.insert(anon);
  }
  std::vector<AnonymousEntity> out;
  for (int anon : ofA)
    if (ofB.count(anon)) out.push_back(g.nodes[anon].anon);
  std::sort(out.begin(), out.end());
  return out;
}

Justification justify(const ClassGraph& g, const AttentionMap& att, const std::string& unseen,
                      int k, const JustifyTemplates& templates) {
  if (!g.unseen.count(unseen)) fail(Errc::BadInput, "'" + unseen + "' is not an unseen class");
  Justification j;
  j.unseenClass = unseen;
  j.impressive = select_impressive(att, unseen, g.seen, k);

  for (const auto& [seenClass, weight] : j.impressive) {
    std::set<std::string> ancestors = common_ancestors(g, seenClass, unseen);
    std::vector<AnonymousEntity> props = shared_properties(g, seenClass, unseen);
    bool any = false;
    if (!ancestors.empty()) {
      any = true;
      j.hierarchyEvidence.push_back({seenClass, ancestors});
      for (const std::string& anc : ancestors) {
        std::string s = replace_all(templates.ancestor, "{seen}", seenClass);
        s = replace_all(s, "{unseen}", unseen);
        j.renderedText.push_back(replace_all(s, "{ancestor}", anc));
      }
    }
    if (!props.empty()) {
      any = true;
      j.propertyEvidence.push_back({seenClass, props});
      for (const AnonymousEntity& anon : props) {
        std::string s = replace_all(templates.property, "{seen}", seenClass);
        s = replace_all(s, "{unseen}", unseen);
        s = replace_all(s, "{property}", anon.property);
        j.renderedText.push_back(replace_all(s, "{value}", anon.value));
      }
    }
    if (!any) {
      std::string s = replace_all(templates.fallback, "{seen}", seenClass);
      s = replace_all(s, "{unseen}", unseen);
      std::ostringstream w;
      w.precision(6);
      w << weight;
      j.renderedText.push_back(replace_all(s, "{weight}", w.str()));
    }
  }
  return j;
}

std::string justification_json(const Justification& j) {
  nlohmann::json out;
  out["unseenClass"] = j.unseenClass;
  nlohmann::json impressive = nlohmann::json::array();
  for (const auto& [cls, w] : j.impressive) impressive.push_back({{"class", cls}, {"weight", w}});
  out["impressive"] = std::move(impressive);
  nlohmann::json hier = nlohmann::json::array();
  for (const auto& [cls, ancestors] : j.hierarchyEvidence)
    hier.push_back({{"class", cls}, {"commonAncestors", ancestors}});
  out["hierarchyEvidence"] = std::move(hier);
  nlohmann::json props = nlohmann::json::array();
  for (const auto& [cls, pairs] : j.propertyEvidence) {
    nlohmann::json shared = nlohmann::json::array();
    for (const AnonymousEntity& anon : pairs)
      shared.push_back({{"property", anon.property}, {"value", anon.value}});
    props.push_back({{"class", cls}, {"shared", shared}});
  }
  out["propertyEvidence"] = std::move(props);
  out["sentences"] = j.renderedText;
  return out.dump(2) + "\n";
}

}  // namespace kgx
