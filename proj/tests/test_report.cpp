#include "amc/report.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace amc;

namespace {

GroundTruthInstance fixture(Index noisy) {
  GeneratorConfig c;
  c.n1 = 8;
  c.n2 = 8;
  c.rank_r = 2;
  c.num_noisy = noisy;
  c.seed = 7;
  return generate(c);
}

}  // namespace

TEST_CASE("run report json has the result schema") {
  const GroundTruthInstance inst = fixture(1);
  const RunReport rep = run_instance(inst, {}, 1);
  const auto doc = nlohmann::json::parse(to_json(rep));
  for (const char* key : {"status", "noisy_rows_hat", "query_count", "proof_bound", "stated_bound",
                          "max_rel_error", "params"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["status"] == "ok");
  CHECK(doc["noisy_rows_hat"].get<IndexSet>() == inst.noisy_rows());
  CHECK(doc["params"]["epsilon"] == 0.1);
  CHECK(doc["params"]["psi_source"] == "exhaustive");
}

TEST_CASE("clean fixture reports no noisy rows") {
  const auto doc = nlohmann::json::parse(to_json(run_instance(fixture(0), {}, 1)));
  CHECK(doc["noisy_rows_hat"].empty());
}

TEST_CASE("run report json is byte-identical for identical seeds") {
  const GroundTruthInstance inst = fixture(2);
  const std::string first = to_json(run_instance(inst, {}, 9));
  for (int k = 0; k < 5; ++k) CHECK(to_json(run_instance(inst, {}, 9)) == first);
}

TEST_CASE("profile override and generic fallback") {
  const GroundTruthInstance inst = fixture(1);
  const RunReport rep = run_instance(inst, {}, 1, SparsityProfile{3, 4});
  CHECK(rep.profile.source == "user");
  CHECK(rep.bound.params.psi_u == 3);

  GeneratorConfig c;
  c.n1 = 20;
  c.n2 = 18;
  c.rank_r = 2;
  c.num_noisy = 1;
  c.seed = 1;
  const ResolvedProfile big = resolve_profile(generate(c));
  CHECK(big.source == "generic");
  CHECK(big.profile == generic_profile(c));
}

TEST_CASE("bound report text") {
  const std::string text = format_bound_report(theorem_bound({100, 100, 2, 0, 1, 50, 0.1}));
  CHECK(text.find("no psi_v term") != std::string::npos);
  CHECK(text.find("requires psi_u > 1") != std::string::npos);
  const std::string plain = format_bound_report(theorem_bound({100, 100, 2, 0, 50, 50, 0.1}));
  CHECK(plain.find("requires psi_u > 1") == std::string::npos);
}
