#pragma once

// Dense real-matrix primitives shared by every stage of the completion
// pipeline: tolerance-based rank, invertibility, least squares, the
// standard-basis membership test and the sparsity number of a subspace.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace amc {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

/// Relative singular-value cutoff: sigma_k counts toward rank iff
/// sigma_k > rel_threshold * sigma_max.
class RankTolerance {
 public:
  static constexpr double kDefault = 1e-9;

  constexpr RankTolerance() = default;
  explicit RankTolerance(double rel_threshold);

  [[nodiscard]] constexpr double value() const noexcept { return rel_; }

 private:
  double rel_ = kDefault;
};

/// Ordered spanning set of a subspace of R^ambient_dim, stored column-wise.
class SubspaceBasis {
 public:
  /// Rejects dependent columns (at `tol`) and an empty ambient space.
  explicit SubspaceBasis(DenseMatrix vectors, RankTolerance tol = {});

  [[nodiscard]] Index ambient_dim() const noexcept { return vectors_.rows(); }
  [[nodiscard]] Index dim() const noexcept { return vectors_.cols(); }
  [[nodiscard]] const DenseMatrix& vectors() const noexcept { return vectors_; }
  [[nodiscard]] RankTolerance tolerance() const noexcept { return tol_; }

  /// Column space of `m` reduced to an independent spanning set.
  static SubspaceBasis column_space(const DenseMatrix& m, RankTolerance tol = {});

 private:
  DenseMatrix vectors_;
  RankTolerance tol_;
};

/// Largest ambient dimension accepted by the exhaustive sparsity search.
inline constexpr Index kMaxSparsityAmbient = 22;

[[nodiscard]] bool all_finite(const DenseMatrix& m) noexcept;

/// Number of singular values above tol * sigma_max. Empty or zero matrices have rank 0.
[[nodiscard]] Index numerical_rank(const DenseMatrix& m, RankTolerance tol = {});

[[nodiscard]] bool is_invertible(const DenseMatrix& m, RankTolerance tol = {});

/// Minimizer of ||a x - b||_2; throws DegenerateSystem when `a` lacks full column rank.
[[nodiscard]] Vector solve_least_squares(const DenseMatrix& a, const Vector& b,
                                         RankTolerance tol = {});

/// True iff e_row lies in the column space of `m`, decided by whether
/// deleting that row lowers the rank.
[[nodiscard]] bool ei_in_colspace(const DenseMatrix& m, Index row, RankTolerance tol = {});

/// Minimum support size over nonzero vectors of the span.
[[nodiscard]] Index sparsity_number(const SubspaceBasis& basis);

/// ambient_dim - sparsity_number.
[[nodiscard]] Index nonsparsity_number(const SubspaceBasis& basis);

/// True iff some standard basis vector lies in the column space of `m`
/// (equivalently, sparsity number of that space is 1). Polynomial, no size cap.
[[nodiscard]] bool colspace_contains_unit_vector(const DenseMatrix& m, RankTolerance tol = {});

// Index helpers.

[[nodiscard]] DenseMatrix select_rows(const DenseMatrix& m, std::span<const Index> rows);
[[nodiscard]] DenseMatrix select_cols(const DenseMatrix& m, std::span<const Index> cols);
[[nodiscard]] DenseMatrix submatrix(const DenseMatrix& m, std::span<const Index> rows,
                                    std::span<const Index> cols);
[[nodiscard]] DenseMatrix delete_row(const DenseMatrix& m, Index row);

/// {0, ..., n-1} minus `removed`, ascending.
[[nodiscard]] IndexSet complement(Index n, std::span<const Index> removed);

}  // namespace amc
