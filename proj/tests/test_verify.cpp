#include "amc/errors.hpp"
#include "amc/oracle.hpp"
#include "amc/verify.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace amc;
using amc::test::mat;

TEST_CASE("oracle_noisy_rows") {
  CHECK(verify::oracle_noisy_rows(mat({{1, 2}, {2, 4}, {5, 7}})) == IndexSet{2});
  CHECK(verify::oracle_noisy_rows(mat({{3, 1, 4}})) == IndexSet{0});
  GeneratorConfig c;
  c.n1 = 10;
  c.n2 = 8;
  c.rank_r = 3;
  c.enforce_psi = true;
  for (std::uint64_t s = 0; s < 10; ++s) {
    c.seed = s;
    CHECK(verify::oracle_noisy_rows(generate(c).observed()).empty());
  }
}

TEST_CASE("oracle_exact_rank") {
  CHECK(verify::oracle_exact_rank(mat({{1, 2}, {2, 4}})) == 1);
  CHECK(verify::oracle_exact_rank(DenseMatrix::Identity(3, 3)) == 3);
  CHECK(verify::oracle_exact_rank(mat({{1, 2}, {2, 4}, {5, 7}})) == 2);
  CHECK(verify::oracle_exact_rank(DenseMatrix::Zero(2, 5)) == 0);
  // Doubling is exact in binary, so these rows are exactly proportional.
  CHECK(verify::oracle_exact_rank(mat({{0.1, 0.2}, {0.3, 0.6}})) == 1);
  CHECK(verify::oracle_exact_rank(mat({{0.1, 0.2}, {0.3, 0.7}})) == 2);
}

TEST_CASE("the two unit-vector membership tests agree") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Index rows = 1 + t % 12, cols = 1 + (t * 7) % 12;
    const Index rank = t % (std::min(rows, cols) + 1);
    DenseMatrix m = DenseMatrix::Zero(rows, cols);
    if (rank > 0) m = test::gaussian(rows, rank, rng) * test::gaussian(rank, cols, rng);
    if (t % 4 == 1 && rows > 1) {  // plant a unit vector
      m.col(0).setZero();
      m(static_cast<Index>(rng() % rows), 0) = 2.5;
    }
    for (Index i = 0; i < rows; ++i) {
      CHECK(ei_in_colspace(m, i) == verify::ei_in_colspace_append(m, i));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("bitmask sparsity agrees with cardinality-first sparsity") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 40; ++t) {
    const Index n = 4 + t % 7;
    const Index d = 1 + t % 3;
    DenseMatrix b = test::gaussian(n, d, rng);
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < d; ++k)
        if (rng() % 2 == 0) b(i, k) = 0.0;
    if (numerical_rank(b) != d) continue;
    const SubspaceBasis basis(b);
    CHECK(sparsity_number(basis) == verify::sparsity_number_bitmask(basis));
  }
}

TEST_CASE("trial stats csv round-trip") {
  verify::TrialStats s;
  s.n1 = 12;
  s.n2 = 9;
  s.r = 2;
  s.omega = 1;
  s.psi_u = 10;
  s.epsilon = 0.1;
  s.trials = 7;
  s.successes = 6;
  s.mean_queries = 100.0 / 7.0;
  s.proof_bound = std::sqrt(2.0) * 1e3;
  s.bound_violations = 1;
  CHECK(verify::parse_trial_stats_csv_row(verify::to_csv_row(s)) == s);
  CHECK_THROWS_AS((void)verify::parse_trial_stats_csv_row("1,2,3"), InvalidInput);
  CHECK_THROWS_AS((void)verify::parse_trial_stats_csv_row("a,2,3,4,5,6,7,8,9,10,11"), InvalidInput);
}

TEST_CASE("success rate on clean 8x8 rank-2 instances") {
  GeneratorConfig c;
  c.n1 = 8;
  c.n2 = 8;
  c.rank_r = 2;
  c.enforce_psi = true;
  std::vector<std::uint64_t> seeds(200);
  std::iota(seeds.begin(), seeds.end(), 1000);

  CompletionParams p;
  const verify::TrialStats s = verify::estimate_success_rate(c, p, seeds);
  CHECK(s.trials == 200);
  CHECK(static_cast<double>(s.successes) / 200.0 >= 0.8);
  CHECK(s.mean_queries <= 64.0);

  p.epsilon = 0.01;
  const verify::TrialStats tight = verify::estimate_success_rate(c, p, seeds);
  CHECK(static_cast<double>(tight.successes) / 200.0 >= 0.95);
}

TEST_CASE("run_trials order and content do not depend on thread count") {
  GeneratorConfig c;
  c.n1 = 10;
  c.n2 = 9;
  c.rank_r = 2;
  c.num_noisy = 1;
  c.enforce_psi = true;
  std::vector<std::uint64_t> seeds(24);
  std::iota(seeds.begin(), seeds.end(), 5);
  const auto one = verify::run_trials(c, {}, seeds, 1);
  const auto four = verify::run_trials(c, {}, seeds, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].instance_seed == seeds[k]);
    CHECK(one[k].instance_seed == four[k].instance_seed);
    CHECK(one[k].query_count == four[k].query_count);
    CHECK(one[k].success() == four[k].success());
  }
}

TEST_CASE("detection probability with dense spans") {
  // r = 1 and an empty mid state: every row extends any nonzero column,
  // so the rate is (|noisy| + psi)/n1 = 1 up to zero entries.
  GeneratorConfig c;
  c.n1 = 10;
  c.n2 = 8;
  c.rank_r = 1;
  c.num_noisy = 2;
  c.seed = 3;
  const GroundTruthInstance inst = generate(c);
  const DiscoveryState empty;
  const auto est = verify::estimate_detection_probability(inst, empty, 4000, 1);
  const double expected = static_cast<double>(2 + 8) / 10.0;
  CHECK(std::abs(est.rate - expected) <= 3.0 * std::max(est.std_error, 1.0 / 4000.0));
}

TEST_CASE("detection probability lower bound on sparse-basis fixtures") {
  GeneratorConfig c;
  c.n1 = 14;
  c.n2 = 10;
  c.rank_r = 3;
  c.num_noisy = 1;
  c.mode = GeneratorMode::sparse_basis;
  c.target_psi = 3;
  for (std::uint64_t s = 0; s < 3; ++s) {
    c.seed = s;
    const GroundTruthInstance inst = generate(c);
    const DiscoveryState mid = verify::make_mid_state(inst, 1, s);
    const auto est = verify::estimate_detection_probability(inst, mid, 5000, s);
    CHECK(est.rate >= 3.0 / 14.0 - 3.0 * est.std_error);
  }
}

TEST_CASE("detection probability rejects degenerate input") {
  GeneratorConfig c;
  c.n1 = 6;
  c.n2 = 5;
  c.rank_r = 1;
  c.seed = 1;
  const GroundTruthInstance inst = generate(c);
  CHECK_THROWS_AS((void)verify::estimate_detection_probability(inst, {}, 0, 1), InvalidInput);
  const DiscoveryState full = verify::make_mid_state(inst, 1, 0);
  CHECK_THROWS_AS((void)verify::estimate_detection_probability(inst, full, 10, 1), InvalidInput);
}
