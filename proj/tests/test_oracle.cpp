#include "amc/errors.hpp"
#include "amc/instances.hpp"
#include "amc/oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace amc;

namespace {

GroundTruthInstance fixture() {
  GeneratorConfig c;
  c.n1 = 6;
  c.n2 = 5;
  c.rank_r = 1;
  c.num_noisy = 1;
  c.seed = 7;
  return generate(c);
}

}  // namespace

TEST_CASE("entry queries are cached") {
  const GroundTruthInstance inst = fixture();
  QueryOracle o(inst, 1);
  const double v = o.query_entry(0, 0);
  CHECK(o.unique_query_count() == 1);
  CHECK(o.query_entry(0, 0) == v);
  CHECK(o.unique_query_count() == 1);
  CHECK(o.log().size() == 2);
}

TEST_CASE("entries on noisy rows return M + noise") {
  const GroundTruthInstance inst = fixture();
  QueryOracle o(inst, 1);
  const Index g = inst.noisy_rows().front();
  for (Index j = 0; j < inst.n2(); ++j) {
    CHECK(o.query_entry(g, j) == inst.m()(g, j) + inst.noise()(g, j));
  }
}

TEST_CASE("row and column queries count only new cells") {
  const GroundTruthInstance inst = fixture();
  SUBCASE("fresh column") {
    QueryOracle o(inst, 1);
    o.query_column(2);
    CHECK(o.unique_query_count() == inst.n1());
  }
  SUBCASE("column after one entry") {
    QueryOracle o(inst, 1);
    o.query_entry(3, 2);
    o.query_column(2);
    CHECK(o.unique_query_count() == inst.n1());
    CHECK(o.log().back().unique_count == inst.n1());
  }
  SUBCASE("row then column sharing a cell") {
    QueryOracle o(inst, 1);
    const Vector row = o.query_row(1);
    const Vector col = o.query_column(3);
    CHECK(o.unique_query_count() == inst.n1() + inst.n2() - 1);
    CHECK(row(3) == col(1));
  }
}

TEST_CASE("out-of-range queries throw") {
  QueryOracle o(fixture(), 1);
  CHECK_THROWS_AS(o.query_entry(6, 0), InvalidInput);
  CHECK_THROWS_AS(o.query_entry(0, -1), InvalidInput);
  CHECK_THROWS_AS(o.query_row(6), InvalidInput);
  CHECK_THROWS_AS(o.query_column(5), InvalidInput);
}

TEST_CASE("reading unobserved cells is a contract error") {
  QueryOracle o(fixture(), 1);
  CHECK_THROWS_AS((void)o.observed_value(0, 0), ContractError);
  o.query_entry(0, 0);
  CHECK_NOTHROW((void)o.observed_value(0, 0));
  const IndexSet rows{0, 1}, cols{0};
  CHECK_THROWS_AS((void)o.observed_submatrix(rows, cols), ContractError);
}

TEST_CASE("random row draws are replayable and in range") {
  QueryOracle a(fixture(), 42), b(fixture(), 42);
  for (int k = 0; k < 1000; ++k) {
    const Index i = a.draw_random_row();
    CHECK(i == b.draw_random_row());
    CHECK(i >= 0);
    CHECK(i < 6);
  }
}

TEST_CASE("random row draws are uniform") {
  QueryOracle o(DenseMatrix::Ones(10, 3), 5);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(o.draw_random_row())];
  for (int c : counts) CHECK(static_cast<double>(c) / draws == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("unique count ignores query order") {
  const GroundTruthInstance inst = fixture();
  std::vector<std::pair<Index, Index>> cells;
  std::mt19937_64 rng(8);
  for (int k = 0; k < 25; ++k) cells.emplace_back(rng() % 6, rng() % 5);
  QueryOracle forward(inst, 0);
  for (auto [i, j] : cells) forward.query_entry(i, j);
  for (int rep = 0; rep < 10; ++rep) {
    std::shuffle(cells.begin(), cells.end(), rng);
    QueryOracle shuffled(inst, 0);
    for (auto [i, j] : cells) shuffled.query_entry(i, j);
    CHECK(shuffled.unique_query_count() == forward.unique_query_count());
    CHECK(shuffled.observed_mask() == forward.observed_mask());
  }
  const auto marked = std::count(forward.observed_mask().begin(), forward.observed_mask().end(), true);
  CHECK(marked == forward.unique_query_count());
}

TEST_CASE("query log csv export") {
  QueryOracle o(fixture(), 1);
  o.query_entry(1, 2);
  o.query_row(0);
  o.query_column(4);
  std::ostringstream out;
  write_query_log_csv(out, o.log());
  CHECK(out.str() ==
        "kind,i,j,unique_count\n"
        "entry,1,2,1\n"
        "row,0,-1,6\n"
        "column,-1,4,11\n");
}
