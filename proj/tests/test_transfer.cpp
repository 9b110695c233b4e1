#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "helpers.h"
#include "kgx/error.h"
#include "kgx/miner.h"
#include "kgx/reasoner.h"
#include "kgx/transfer.h"
#include "kgx/util.h"

using namespace kgx;

TEST_CASE("transfer logs parse scores and polarity labels") {
  std::vector<TransferRecord> log = load_transfer_log(
      "src,tgt,feature,score\n"
      "D1,D2,conv3,0.8\n"
      "D2,D3,conv5,positive\n"
      "D3,D1,conv3,negative\n");
  REQUIRE(log.size() == 3);
  CHECK(log[0] == TransferRecord{"D1", "D2", "conv3", 0.8});
  CHECK(log[1].score == 1.0);
  CHECK(log[2].score == -1.0);
}

TEST_CASE("transfer log errors carry the row number") {
  CHECK_THROWS_WITH_AS(load_transfer_log("src,tgt,score\nD1,D2,0.5\n"),
                       doctest::Contains("header"), Error);
  CHECK_THROWS_WITH_AS(load_transfer_log("src,tgt,feature,score\nD1,D1,conv3,0.5\n"),
                       doctest::Contains("source equals target"), Error);
  CHECK_THROWS_AS(load_transfer_log("src,tgt,feature,score\nD1,D2,conv3,abc\n"), Error);
  CHECK_THROWS_AS(load_transfer_log("src,tgt,feature,score\nD1,D2,conv3\n"), Error);
}

TEST_CASE("transfer logs round-trip through serialization") {
  Rng rng(5);
  std::vector<TransferRecord> log =
      kgxtest::random_transfers(rng, {"D1", "D2", "D3", "D4"}, 25);
  CHECK(load_transfer_log(serialize_transfer_log(log)) == log);
}

TEST_CASE("scenario generation is seed deterministic") {
  ScenarioConfig config;
  config.numDomains = 6;
  config.numTransfers = 16;
  config.planted = make_default_planted(1, 1, 0.5);

  SynthScenario a = generate_scenario(config, 7);
  SynthScenario b = generate_scenario(config, 7);
  CHECK(a.transfers == b.transfers);
  CHECK(a.domains.size() == b.domains.size());
  for (size_t i = 0; i < a.domains.size(); ++i) CHECK(a.domains[i] == b.domains[i]);

  SynthScenario c = generate_scenario(config, 8);
  CHECK(a.transfers != c.transfers);
}

TEST_CASE("the evidence bookkeeping matches actual co-existence") {
  ScenarioConfig config;
  config.numDomains = 6;
  config.numTransfers = 12;
  config.planted = make_default_planted(1, 1, 0.5);
  SynthScenario s = generate_scenario(config, 21);
  std::vector<DomainOntology> closed;
  for (const DomainOntology& d : s.domains) closed.push_back(materialize(d));

  std::map<std::string, size_t> domainIdx;
  for (size_t d = 0; d < s.domains.size(); ++d) domainIdx[s.domains[d].id] = d;
  for (const TransferRecord& t : s.transfers) {
    for (size_t k = 0; k < s.planted.size(); ++k) {
      bool expected =
          s.hasEvidence[domainIdx[t.source]][k] && s.hasEvidence[domainIdx[t.target]][k];
      CHECK(coexists(s.planted[k].templates, t, closed, s.signatures) == expected);
    }
  }
}

TEST_CASE("a noiseless single-evidence scenario correlates perfectly") {
  ScenarioConfig config;
  config.numDomains = 8;
  config.numTransfers = 20;
  config.planted = make_default_planted(1, 0, 0.5);
  config.noiseSigma = 0.0;
  SynthScenario s = generate_scenario(config, 3);
  std::vector<DomainOntology> closed;
  for (const DomainOntology& d : s.domains) closed.push_back(materialize(d));

  std::vector<int> indicator;
  std::vector<double> scores;
  for (const TransferRecord& t : s.transfers) {
    indicator.push_back(coexists(s.planted[0].templates, t, closed, s.signatures) ? 1 : 0);
    scores.push_back(t.score);
  }
  CorrelationResult res = correlate(indicator, scores);
  CHECK(std::fabs(res.r - 1.0) <= 1e-12);
}

TEST_CASE("written scenarios read back identically") {
  ScenarioConfig config;
  config.numDomains = 5;
  config.numTransfers = 10;
  config.planted = make_default_planted(1, 1, 0.4);
  SynthScenario s = generate_scenario(config, 13);

  auto dir = kgxtest::temp_dir("scenario");
  write_scenario(s, dir);
  CHECK(load_transfer_log(read_file(dir / "transfers.csv")) == s.transfers);
  CHECK(parse_signature_file(read_file(dir / "signatures.txt")).size() == s.signatures.size());
  for (const DomainOntology& d : s.domains)
    CHECK(parse_ontology(d.id, read_file(dir / "domains" / (d.id + ".axioms"))) == d);
  std::filesystem::remove_all(dir);
}
