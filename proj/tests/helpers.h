#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "kgx/axiom.h"
#include "kgx/rng.h"
#include "kgx/transfer.h"

namespace kgxtest {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(KGX_FIXTURES_DIR) / rel;
}

struct CliResult {
  int exitCode = -1;
  std::string output;  // stdout + stderr
};

inline CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(KGX_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult result;
  if (!pipe) return result;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
  int status = pclose(pipe);
  result.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("kgx_" + tag + "_" + std::to_string(getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Small random ontology over a fixed vocabulary, exercising every axiom kind.
inline kgx::DomainOntology random_ontology(kgx::Rng& rng, const std::string& id) {
  using namespace kgx;
  std::vector<std::string> concepts = {"C1", "C2", "C3", "C4"};
  std::vector<std::string> props = {"p1", "p2", "p3"};
  std::vector<std::string> inds = {"a", "b", "c", "d", "e"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng.below(v.size())]; };

  DomainOntology o;
  o.id = id;
  int nSub = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < nSub; ++i) o.insert(Axiom(SubClassOf{pick(concepts), pick(concepts)}));
  if (rng.below(2)) o.insert(Axiom(PropertyChain{pick(props), pick(props), pick(props)}));
  if (rng.below(2))
    o.insert(Axiom(ConceptDefinition{"Def1", pick(concepts), pick(props), pick(concepts)}));
  if (rng.below(2)) o.insert(Axiom(ConceptDefinition{"Def2", pick(concepts), pick(props), "Float"}));
  int nClass = 2 + static_cast<int>(rng.below(4));
  for (int i = 0; i < nClass; ++i)
    o.insert(Axiom(ClassAssertion{pick(concepts), Term::individual(pick(inds))}));
  int nProp = 2 + static_cast<int>(rng.below(5));
  for (int i = 0; i < nProp; ++i)
    o.insert(Axiom(PropertyAssertion{pick(props), Term::individual(pick(inds)),
                                     Term::individual(pick(inds))}));
  if (rng.below(2))
    o.insert(Axiom(PropertyAssertion{pick(props), Term::individual(pick(inds)),
                                     Term::literal("3.5", Datatype::Float)}));
  return o;
}

inline std::vector<kgx::TransferRecord> random_transfers(kgx::Rng& rng,
                                                         const std::vector<std::string>& domainIds,
                                                         int count) {
  std::vector<kgx::TransferRecord> out;
  for (int i = 0; i < count; ++i) {
    std::string src = domainIds[rng.below(domainIds.size())];
    std::string tgt = src;
    while (tgt == src) tgt = domainIds[rng.below(domainIds.size())];
    out.push_back({src, tgt, "conv3", 2.0 * rng.uniform() - 1.0});
  }
  return out;
}

}  // namespace kgxtest
