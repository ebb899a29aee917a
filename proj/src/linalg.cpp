#include "amc/linalg.hpp"

#include "amc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace amc {

RankTolerance::RankTolerance(double rel_threshold) : rel_(rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw InvalidInput("rank tolerance must lie in (0, 1), got " + std::to_string(rel_threshold));
  }
}

SubspaceBasis::SubspaceBasis(DenseMatrix vectors, RankTolerance tol)
    : vectors_(std::move(vectors)), tol_(tol) {
  if (vectors_.rows() == 0) {
    throw InvalidInput("subspace basis needs a positive ambient dimension");
  }
  if (vectors_.cols() > vectors_.rows()) {
    throw InvalidInput("more basis vectors than the ambient dimension");
  }
  if (numerical_rank(vectors_, tol_) != vectors_.cols()) {
    throw InvalidInput("basis vectors are linearly dependent");
  }
}

SubspaceBasis SubspaceBasis::column_space(const DenseMatrix& m, RankTolerance tol) {
  IndexSet kept;
  Index rank = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    kept.push_back(j);
    const Index next = numerical_rank(select_cols(m, kept), tol);
    if (next == rank) {
      kept.pop_back();
    } else {
      rank = next;
    }
  }
  return SubspaceBasis(select_cols(m, kept), tol);
}

bool all_finite(const DenseMatrix& m) noexcept { return m.allFinite(); }

Index numerical_rank(const DenseMatrix& m, RankTolerance tol) {
  if (m.size() == 0) return 0;
  if (!m.allFinite()) throw InvalidInput("numerical_rank: non-finite entry");
  const Eigen::JacobiSVD<DenseMatrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  if (largest == 0.0) return 0;
  const double cutoff = tol.value() * largest;
  return static_cast<Index>((sv.array() > cutoff).count());
}

bool is_invertible(const DenseMatrix& m, RankTolerance tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("is_invertible: matrix is " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", not square");
  }
  return numerical_rank(m, tol) == m.rows();
}

Vector solve_least_squares(const DenseMatrix& a, const Vector& b, RankTolerance tol) {
  if (a.rows() != b.size()) throw InvalidInput("solve_least_squares: row count mismatch");
  if (!b.allFinite()) throw InvalidInput("solve_least_squares: non-finite right-hand side");
  if (a.cols() == 0) return Vector(0);
  if (numerical_rank(a, tol) != a.cols()) {
    throw DegenerateSystem("solve_least_squares: matrix lacks full column rank");
  }
  if (a.rows() == a.cols()) return a.partialPivLu().solve(b);
  return a.colPivHouseholderQr().solve(b);
}

bool ei_in_colspace(const DenseMatrix& m, Index row, RankTolerance tol) {
  if (row < 0 || row >= m.rows()) {
    throw InvalidInput("ei_in_colspace: row " + std::to_string(row) + " out of range");
  }
  return numerical_rank(delete_row(m, row), tol) < numerical_rank(m, tol);
}

namespace {

// Advances `idx` (strictly increasing, values < n) to the next k-combination.
bool next_combination(std::vector<Index>& idx, Index n) {
  const auto k = static_cast<Index>(idx.size());
  for (Index pos = k - 1; pos >= 0; --pos) {
    if (idx[pos] < n - k + pos) {
      ++idx[pos];
      for (Index q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Index sparsity_number(const SubspaceBasis& basis) {
  const Index n = basis.ambient_dim();
  const Index d = basis.dim();
  if (d == 0) throw InvalidInput("sparsity_number: zero-dimensional span");
  if (n > kMaxSparsityAmbient) {
    throw CapacityError("sparsity_number: ambient dimension " + std::to_string(n) +
                        " exceeds exhaustive cap " + std::to_string(kMaxSparsityAmbient));
  }
  // A nonzero member supported inside S exists iff the rows outside S lose rank.
  std::vector<Index> support;
  for (Index k = 1; k <= n - d; ++k) {
    support.resize(static_cast<std::size_t>(k));
    std::iota(support.begin(), support.end(), Index{0});
    do {
      const IndexSet zero_rows = complement(n, support);
      if (numerical_rank(select_rows(basis.vectors(), zero_rows), basis.tolerance()) < d) {
        return k;
      }
    } while (next_combination(support, n));
  }
  return n - d + 1;
}

Index nonsparsity_number(const SubspaceBasis& basis) {
  return basis.ambient_dim() - sparsity_number(basis);
}

bool colspace_contains_unit_vector(const DenseMatrix& m, RankTolerance tol) {
  const Index full = numerical_rank(m, tol);
  for (Index i = 0; i < m.rows(); ++i) {
    if (numerical_rank(delete_row(m, i), tol) < full) return true;
  }
  return false;
}

DenseMatrix select_rows(const DenseMatrix& m, std::span<const Index> rows) {
  DenseMatrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = m.row(rows[k]);
  return out;
}

DenseMatrix select_cols(const DenseMatrix& m, std::span<const Index> cols) {
  DenseMatrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

DenseMatrix submatrix(const DenseMatrix& m, std::span<const Index> rows,
                      std::span<const Index> cols) {
  DenseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(static_cast<Index>(a), static_cast<Index>(b)) = m(rows[a], cols[b]);
    }
  }
  return out;
}

DenseMatrix delete_row(const DenseMatrix& m, Index row) {
  DenseMatrix out(m.rows() - 1, m.cols());
  if (row > 0) out.topRows(row) = m.topRows(row);
  if (row < m.rows() - 1) out.bottomRows(m.rows() - 1 - row) = m.bottomRows(m.rows() - 1 - row);
  return out;
}

IndexSet complement(Index n, std::span<const Index> removed) {
  std::vector<bool> drop(static_cast<std::size_t>(n), false);
  for (Index i : removed) {
    if (i >= 0 && i < n) drop[static_cast<std::size_t>(i)] = true;
  }
  IndexSet out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

}  // namespace amc
