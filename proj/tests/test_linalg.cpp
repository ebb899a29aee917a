#include "amc/errors.hpp"
#include "amc/linalg.hpp"
#include "amc/verify.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

using namespace amc;
using amc::test::mat;
using amc::test::vec;

TEST_CASE("numerical_rank on small matrices") {
  CHECK(numerical_rank(mat({{1, 2}, {3, 4}})) == 2);
  CHECK(numerical_rank(mat({{1, 2}, {2, 4}})) == 1);
  CHECK(numerical_rank(mat({{1, 2}, {2, 4}, {5, 7}})) == 2);
  CHECK(numerical_rank(DenseMatrix::Zero(3, 4)) == 0);
  CHECK(numerical_rank(DenseMatrix(0, 3)) == 0);
}

TEST_CASE("numerical_rank rejects non-finite entries") {
  DenseMatrix m = mat({{1, 2}, {3, 4}});
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)numerical_rank(m), InvalidInput);
  m(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)numerical_rank(m), InvalidInput);
}

TEST_CASE("rank tolerance domain") {
  CHECK_THROWS_AS(RankTolerance(0.0), InvalidInput);
  CHECK_THROWS_AS(RankTolerance(1.0), InvalidInput);
  CHECK(RankTolerance{}.value() == doctest::Approx(1e-9));
}

TEST_CASE("is_invertible") {
  CHECK(is_invertible(mat({{1, 2}, {2, 5}})));
  CHECK_FALSE(is_invertible(mat({{1, 2}, {2, 4}})));
  CHECK_FALSE(is_invertible(mat({{0}})));
  CHECK_THROWS_AS((void)is_invertible(mat({{1, 2, 3}, {4, 5, 6}})), InvalidInput);
}

TEST_CASE("solve_least_squares") {
  CHECK(solve_least_squares(mat({{1}, {2}}), vec({3, 6}))(0) == doctest::Approx(3.0));
  const Vector id = solve_least_squares(DenseMatrix::Identity(2, 2), vec({4, 7}));
  CHECK(id(0) == doctest::Approx(4.0));
  CHECK(id(1) == doctest::Approx(7.0));
  // Inverse of [[1,2],[2,5]] is [[5,-2],[-2,1]].
  const Vector x = solve_least_squares(mat({{1, 2}, {2, 5}}), vec({1, 0}));
  CHECK(x(0) == doctest::Approx(5.0));
  CHECK(x(1) == doctest::Approx(-2.0));
  CHECK_THROWS_AS((void)solve_least_squares(mat({{1, 2}, {2, 4}}), vec({1, 0})), DegenerateSystem);
}

TEST_CASE("solve_least_squares residual on random square systems") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + t % 10;
    const DenseMatrix a = test::gaussian(n, n, rng);
    const Vector b = test::gaussian(n, 1, rng);
    const Vector x = solve_least_squares(a, b);
    CHECK((a * x - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("ei_in_colspace examples") {
  const DenseMatrix m = mat({{1, 2}, {2, 4}, {5, 7}});
  CHECK(ei_in_colspace(m, 2));  // (2/3) col1 - (1/3) col2 = e_3
  CHECK_FALSE(ei_in_colspace(m, 0));
  CHECK(ei_in_colspace(DenseMatrix::Identity(2, 2), 0));
  CHECK_THROWS_AS((void)ei_in_colspace(m, 3), InvalidInput);
  CHECK_THROWS_AS((void)ei_in_colspace(m, -1), InvalidInput);
}

TEST_CASE("sparsity numbers of small subspaces") {
  const SubspaceBasis e1(mat({{1}, {0}, {0}}));
  const SubspaceBasis ones(mat({{1}, {1}, {1}}));
  const SubspaceBasis pair(mat({{1, 0}, {1, 1}, {0, 1}}));
  // Expected values come from the independent bitmask enumeration.
  REQUIRE(verify::sparsity_number_bitmask(pair) == 2);
  CHECK(sparsity_number(e1) == 1);
  CHECK(sparsity_number(ones) == 3);
  CHECK(sparsity_number(pair) == 2);
  CHECK(nonsparsity_number(e1) == 2);
  CHECK(nonsparsity_number(ones) == 0);
  CHECK(nonsparsity_number(pair) == 1);
}

TEST_CASE("sparsity_number errors") {
  CHECK_THROWS_AS((void)sparsity_number(SubspaceBasis(DenseMatrix(3, 0))), InvalidInput);
  CHECK_THROWS_AS((void)sparsity_number(SubspaceBasis(DenseMatrix::Identity(23, 1))), CapacityError);
  CHECK_THROWS_AS(SubspaceBasis(mat({{1, 2}, {2, 4}})), InvalidInput);
}

TEST_CASE("sparsity of disjoint-support spans is the smallest support") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const Index n = 10;
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<Index> size(1, 4);
    const Index s1 = size(rng), s2 = size(rng);
    DenseMatrix b = DenseMatrix::Zero(n, 2);
    for (Index k = 0; k < s1; ++k) b(order[k], 0) = 1.0 + static_cast<double>(k);
    for (Index k = 0; k < s2; ++k) b(order[s1 + k], 1) = -2.0 - static_cast<double>(k);
    CHECK(sparsity_number(SubspaceBasis(b)) == std::min(s1, s2));
  }
}

TEST_CASE("sparsity number lies in [1, n - d + 1]") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const Index n = 3 + t % 8;
    const Index d = 1 + t % std::min<Index>(n, 4);
    DenseMatrix b = test::gaussian(n, d, rng);
    // Zero out a random pattern so small sparsity numbers also occur.
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < d; ++k)
        if ((rng() % 3) == 0) b(i, k) = 0.0;
    if (numerical_rank(b) != d) continue;
    const Index psi = sparsity_number(SubspaceBasis(b));
    CHECK(psi >= 1);
    CHECK(psi <= n - d + 1);
    CHECK(psi == verify::sparsity_number_bitmask(SubspaceBasis(b)));
  }
}

TEST_CASE("numerical_rank is invariant under permutations and scaling") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const Index rows = 2 + t % 7, cols = 2 + (t / 7) % 6;
    const Index rank = 1 + t % std::min(rows, cols);
    const DenseMatrix m = test::gaussian(rows, rank, rng) * test::gaussian(rank, cols, rng);
    const Index base = numerical_rank(m);
    CHECK(base == rank);

    Eigen::PermutationMatrix<Eigen::Dynamic> pr(rows), pc(cols);
    pr.setIdentity();
    pc.setIdentity();
    std::shuffle(pr.indices().data(), pr.indices().data() + rows, rng);
    std::shuffle(pc.indices().data(), pc.indices().data() + cols, rng);
    CHECK(numerical_rank(pr * m * pc) == base);
    CHECK(numerical_rank(-3.5e4 * m) == base);
    CHECK(numerical_rank(1e-6 * m) == base);
  }
}

TEST_CASE("numerical_rank agrees with exact rational rank on integer matrices") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 150; ++t) {
    const Index rows = 1 + t % 12, cols = 1 + (t * 5) % 12;
    const Index rank = t % (std::min(rows, cols) + 1);
    DenseMatrix m = DenseMatrix::Zero(rows, cols);
    if (rank > 0) m = test::integer_low_rank(rows, cols, rank, rng);
    CHECK(numerical_rank(m) == verify::oracle_exact_rank(m));
  }
}

TEST_CASE("colspace_contains_unit_vector") {
  CHECK(colspace_contains_unit_vector(mat({{1, 2}, {2, 4}, {5, 7}})));
  CHECK_FALSE(colspace_contains_unit_vector(mat({{1}, {1}, {1}})));
  CHECK(colspace_contains_unit_vector(mat({{1}, {0}, {0}})));
}

TEST_CASE("index helpers") {
  const DenseMatrix m = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const IndexSet rows{2, 0};
  const IndexSet cols{1};
  CHECK(submatrix(m, rows, cols) == mat({{8}, {2}}));
  CHECK(delete_row(m, 1) == mat({{1, 2, 3}, {7, 8, 9}}));
  CHECK(complement(5, IndexSet{3, 0}) == IndexSet{1, 2, 4});
}
