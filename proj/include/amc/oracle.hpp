#pragma once

// The algorithm's only window onto N. Every entry read goes through here so
// the number of distinct observed cells is exact.

#include "amc/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace amc {

class GroundTruthInstance;

enum class QueryKind { entry, row, column };

[[nodiscard]] std::string_view to_string(QueryKind kind) noexcept;

struct QueryRecord {
  QueryKind kind;
  Index i;  // -1 for column queries
  Index j;  // -1 for row queries
  Index unique_count;  // after the query
};

using QueryLog = std::vector<QueryRecord>;

/// Writes "kind,i,j,unique_count" lines, header first.
void write_query_log_csv(std::ostream& out, const QueryLog& log);

class QueryOracle {
 public:
  QueryOracle(const GroundTruthInstance& instance, std::uint64_t rng_seed);
  /// Oracle over a bare matrix (no ground truth attached).
  QueryOracle(DenseMatrix n, std::uint64_t rng_seed);

  [[nodiscard]] Index rows() const noexcept { return n_->rows(); }
  [[nodiscard]] Index cols() const noexcept { return n_->cols(); }

  double query_entry(Index i, Index j);
  Vector query_row(Index i);
  Vector query_column(Index j);

  /// Uniform row index from the oracle-owned generator.
  Index draw_random_row();

  [[nodiscard]] bool is_observed(Index i, Index j) const;
  /// Value of an already observed cell; ContractError if never queried.
  [[nodiscard]] double observed_value(Index i, Index j) const;
  /// Submatrix of observed cells; ContractError if any cell is unobserved.
  [[nodiscard]] DenseMatrix observed_submatrix(std::span<const Index> rows,
                                               std::span<const Index> cols) const;

  [[nodiscard]] Index unique_query_count() const noexcept { return unique_; }
  [[nodiscard]] const std::vector<bool>& observed_mask() const noexcept { return mask_; }
  [[nodiscard]] const QueryLog& log() const noexcept { return log_; }
  [[nodiscard]] std::uint64_t rng_seed() const noexcept { return seed_; }

 private:
  void check_cell(Index i, Index j) const;
  double touch(Index i, Index j);
  [[nodiscard]] std::size_t flat(Index i, Index j) const noexcept {
    return static_cast<std::size_t>(i * n_->cols() + j);
  }

  std::shared_ptr<const DenseMatrix> n_;
  std::vector<bool> mask_;  // row-major
  Index unique_ = 0;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  QueryLog log_;
};

}  // namespace amc
