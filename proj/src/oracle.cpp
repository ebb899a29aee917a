#include "amc/oracle.hpp"

#include "amc/errors.hpp"
#include "amc/instances.hpp"

#include <ostream>

namespace amc {

std::string_view to_string(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::entry:
      return "entry";
    case QueryKind::row:
      return "row";
    case QueryKind::column:
      return "column";
  }
  return "unknown";
}

void write_query_log_csv(std::ostream& out, const QueryLog& log) {
  out << "kind,i,j,unique_count\n";
  for (const auto& rec : log) {
    out << to_string(rec.kind) << ',' << rec.i << ',' << rec.j << ',' << rec.unique_count << '\n';
  }
}

QueryOracle::QueryOracle(const GroundTruthInstance& instance, std::uint64_t rng_seed)
    : QueryOracle(instance.observed(), rng_seed) {}

QueryOracle::QueryOracle(DenseMatrix n, std::uint64_t rng_seed)
    : n_(std::make_shared<const DenseMatrix>(std::move(n))),
      mask_(static_cast<std::size_t>(n_->size()), false),
      seed_(rng_seed),
      rng_(rng_seed) {
  if (n_->size() == 0) throw InvalidInput("oracle over an empty matrix");
  if (!n_->allFinite()) throw InvalidInput("oracle matrix has non-finite entries");
}

void QueryOracle::check_cell(Index i, Index j) const {
  if (i < 0 || i >= rows() || j < 0 || j >= cols()) {
    throw InvalidInput("query (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") outside " + std::to_string(rows()) + "x" + std::to_string(cols()));
  }
}

double QueryOracle::touch(Index i, Index j) {
  auto cell = mask_[flat(i, j)];
  if (!cell) {
    cell = true;
    ++unique_;
  }
  return (*n_)(i, j);
}

double QueryOracle::query_entry(Index i, Index j) {
  check_cell(i, j);
  const double v = touch(i, j);
  log_.push_back({QueryKind::entry, i, j, unique_});
  return v;
}

Vector QueryOracle::query_row(Index i) {
  check_cell(i, 0);
  Vector out(cols());
  for (Index j = 0; j < cols(); ++j) out(j) = touch(i, j);
  log_.push_back({QueryKind::row, i, -1, unique_});
  return out;
}

Vector QueryOracle::query_column(Index j) {
  check_cell(0, j);
  Vector out(rows());
  for (Index i = 0; i < rows(); ++i) out(i) = touch(i, j);
  log_.push_back({QueryKind::column, -1, j, unique_});
  return out;
}

Index QueryOracle::draw_random_row() {
  std::uniform_int_distribution<Index> dist(0, rows() - 1);
  return dist(rng_);
}

bool QueryOracle::is_observed(Index i, Index j) const {
  check_cell(i, j);
  return mask_[flat(i, j)];
}

double QueryOracle::observed_value(Index i, Index j) const {
  if (!is_observed(i, j)) {
    throw ContractError("cell (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") read before being queried");
  }
  return (*n_)(i, j);
}

DenseMatrix QueryOracle::observed_submatrix(std::span<const Index> rows,
                                            std::span<const Index> cols) const {
  DenseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(static_cast<Index>(a), static_cast<Index>(b)) = observed_value(rows[a], cols[b]);
    }
  }
  return out;
}

}  // namespace amc
