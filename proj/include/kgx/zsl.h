#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgx/enrich.h"
#include "kgx/triples.h"

namespace kgx {

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
  static Mat identity(int n);
};

// A (property, value) pair promoted to a graph node, so property sharing
// becomes adjacency.
struct AnonymousEntity {
  std::string property;
  std::string value;

  friend bool operator==(const AnonymousEntity&, const AnonymousEntity&) = default;
  friend auto operator<=>(const AnonymousEntity&, const AnonymousEntity&) = default;
};

struct ClassGraph {
  struct Node {
    std::string id;
    std::string iri;  // empty for anonymous nodes
    bool anonymous = false;
    AnonymousEntity anon;  // anonymous nodes only
  };

  std::vector<Node> nodes;
  std::map<std::string, int> index;                // id -> node position
  std::vector<std::pair<int, int>> subclassEdges;  // (child, parent), class nodes only
  std::vector<std::pair<int, int>> propertyEdges;  // (class, anonymous)
  std::set<std::string> seen;
  std::set<std::string> unseen;
  std::map<std::string, std::vector<double>> features;
  int featureDim = 0;

  int node_of(const std::string& id) const;
  std::vector<std::set<int>> adjacency() const;  // undirected, both edge kinds
};

struct FeatureSource {
  enum class Kind { File, Random };
  Kind kind = Kind::Random;
  std::string path;   // File
  int dim = 8;        // Random
  uint64_t seed = 0;  // Random: uniform in +-1/sqrt(dim)
};

struct ClassGraphConfig {
  std::string hierarchyPredicate = kRdfsSubClassOf;
  std::vector<std::string> propertyPredicates;
  std::vector<std::string> labelPredicates{kRdfsLabel};
  std::vector<std::string> seen;  // labels or IRIs
  std::vector<std::string> unseen;
  FeatureSource featureSource;
};

ClassGraph build_class_graph(const TripleSet& kg, const ClassGraphConfig& config);

struct GatParams {
  Mat weight;                   // F' x F
  std::vector<double> attention;  // length 2F'
  double leakySlope = 0.2;
};

GatParams parse_gat_params(const std::string& text);
std::string serialize_gat_params(const GatParams& params);
GatParams random_gat_params(int featureDim, uint64_t seed);  // W: F x F, uniform +-1/sqrt(F)

struct AttentionMap {
  // rows[i][j] = attention of node i on neighbor j; each non-empty row sums
  // to 1 and is non-negative.
  std::map<std::string, std::map<std::string, double>> rows;
};

struct GatResult {
  AttentionMap attention;
  std::map<std::string, std::vector<double>> features;  // updated h'
};

// Single-head GAT forward pass over closed neighborhoods:
//   e_ij = LeakyReLU(a . [W h_i || W h_j]),  alpha via max-subtracted softmax,
//   h'_i = sum_j alpha_ij W h_j.
GatResult gat_attention(const ClassGraph& g, const GatParams& params);

// Attention file: lines `unseenClass seenClass weight`; rows are normalized.
AttentionMap parse_attention_file(const std::string& text, const ClassGraph& g);

// Propagates attention over up to `depth` hops (sum over paths of the
// product of attentions); used when impressive classes are not direct
// neighbors of the unseen node.
AttentionMap multi_hop_attention(const AttentionMap& att, const ClassGraph& g, int depth);

std::vector<std::pair<std::string, double>> select_impressive(const AttentionMap& att,
                                                              const std::string& unseen,
                                                              const std::set<std::string>& seen,
                                                              int k);

// Shared ancestors under the SubClassOf closure at minimal max-distance from
// the two nodes, all ties returned. A node is its own zero-distance ancestor.
std::set<std::string> common_ancestors(const ClassGraph& g, const std::string& a,
                                       const std::string& b);

std::vector<AnonymousEntity> shared_properties(const ClassGraph& g, const std::string& a,
                                               const std::string& b);

struct JustifyTemplates {
  std::string ancestor = "{seen} and {unseen} share the same ancestor {ancestor}.";
  std::string property = "{unseen} has the same {property} ({value}) as {seen}.";
  std::string fallback = "{seen} transfers features to {unseen} with attention weight {weight}.";
};

struct Justification {
  std::string unseenClass;
  std::vector<std::pair<std::string, double>> impressive;
  std::vector<std::pair<std::string, std::set<std::string>>> hierarchyEvidence;
  std::vector<std::pair<std::string, std::vector<AnonymousEntity>>> propertyEvidence;
  std::vector<std::string> renderedText;
};

Justification justify(const ClassGraph& g, const AttentionMap& att, const std::string& unseen,
                      int k, const JustifyTemplates& templates);

std::string justification_json(const Justification& j);

}  // namespace kgx
