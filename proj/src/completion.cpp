#include "amc/completion.hpp"

#include "amc/errors.hpp"
#include "amc/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace amc {

std::string_view to_string(CompletionStatus status) noexcept {
  switch (status) {
    case CompletionStatus::ok:
      return "ok";
    case CompletionStatus::precondition_violated:
      return "precondition-violated";
    case CompletionStatus::budget_exhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

void CompletionParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

Index compute_eta(Index n1, Index n2, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  if (n1 < 1 || n2 < 1) throw InvalidInput("compute_eta: dimensions must be positive");
  const double log_inv = std::log(1.0 / epsilon);
  const double ratio = 2.0 * static_cast<double>(n1) / static_cast<double>(n2);
  const double eta = std::ceil(std::max(ratio * log_inv, log_inv));
  return std::max<Index>(1, static_cast<Index>(eta));
}

DiscoveryState discover(QueryOracle& oracle, const CompletionParams& params) {
  params.validate();
  const Index n1 = oracle.rows();
  const Index n2 = oracle.cols();

  DiscoveryState state;
  state.eta = compute_eta(n1, n2, params.epsilon);
  std::vector<bool> in_R(static_cast<std::size_t>(n1), false);
  std::vector<bool> in_C(static_cast<std::size_t>(n2), false);

  while (state.zeta < state.eta) {
    ++state.passes;
    bool grew = false;
    for (Index j = 0; j < n2; ++j) {
      if (in_C[static_cast<std::size_t>(j)]) continue;
      const Index i = oracle.draw_random_row();
      oracle.query_entry(i, j);
      if (in_R[static_cast<std::size_t>(i)]) continue;  // R u {i} = R cannot be square with C u {j}

      IndexSet rows_hat = state.rows_R;
      IndexSet cols_hat = state.cols_C;
      rows_hat.push_back(i);
      cols_hat.push_back(j);
      for (Index a : rows_hat) {
        for (Index b : cols_hat) {
          if (!oracle.is_observed(a, b)) oracle.query_entry(a, b);
        }
      }
      if (!is_invertible(oracle.observed_submatrix(rows_hat, cols_hat), params.tol)) continue;

      oracle.query_column(j);
      oracle.query_row(i);
      state.rows_R = std::move(rows_hat);
      state.cols_C = std::move(cols_hat);
      in_R[static_cast<std::size_t>(i)] = true;
      in_C[static_cast<std::size_t>(j)] = true;
      ++state.rank_hat;
      grew = true;
    }
    state.zeta = grew ? 0 : state.zeta + 1;
  }
  return state;
}

IndexSet identify_noisy_rows(const QueryOracle& oracle, const DiscoveryState& state,
                             const CompletionParams& params) {
  IndexSet all_rows(static_cast<std::size_t>(oracle.rows()));
  for (Index i = 0; i < oracle.rows(); ++i) all_rows[static_cast<std::size_t>(i)] = i;
  const DenseMatrix n_C = oracle.observed_submatrix(all_rows, state.cols_C);

  IndexSet flagged;
  for (Index i : state.rows_R) {
    if (ei_in_colspace(n_C, i, params.tol)) flagged.push_back(i);
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

namespace {

bool contains(const IndexSet& set, Index v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

// Greedy left-to-right selection of columns of C that are independent on the clean basis rows.
IndexSet select_basis_columns(const QueryOracle& oracle, const IndexSet& clean_R,
                              const IndexSet& cols_C, RankTolerance tol) {
  IndexSet ordered = cols_C;
  std::sort(ordered.begin(), ordered.end());
  IndexSet basis;
  const auto target = static_cast<Index>(clean_R.size());
  for (Index j : ordered) {
    if (static_cast<Index>(basis.size()) == target) break;
    basis.push_back(j);
    if (numerical_rank(oracle.observed_submatrix(clean_R, basis), tol) !=
        static_cast<Index>(basis.size())) {
      basis.pop_back();
    }
  }
  return basis;
}

CompletionResult unknown_result(const QueryOracle& oracle, const DiscoveryState& state,
                                CompletionStatus status) {
  CompletionResult res;
  res.recovered = DenseMatrix::Constant(oracle.rows(), oracle.cols(), kUnknown);
  res.rows_R = state.rows_R;
  res.cols_C = state.cols_C;
  res.query_count = oracle.unique_query_count();
  res.status = status;
  return res;
}

}  // namespace

CompletionResult recover(QueryOracle& oracle, const DiscoveryState& state,
                         const IndexSet& noisy_rows, const CompletionParams& params) {
  IndexSet clean_R;
  for (Index i : state.rows_R) {
    if (!contains(noisy_rows, i)) clean_R.push_back(i);
  }
  const IndexSet basis = select_basis_columns(oracle, clean_R, state.cols_C, params.tol);
  if (basis.size() != clean_R.size()) {
    throw DegenerateSystem("recover: only " + std::to_string(basis.size()) +
                           " independent basis columns for " + std::to_string(clean_R.size()) +
                           " clean basis rows");
  }
  const DenseMatrix basis_block = oracle.observed_submatrix(clean_R, basis);
  const IndexSet clean_rows = complement(oracle.rows(), noisy_rows);
  const DenseMatrix clean_basis_cols = oracle.observed_submatrix(clean_rows, basis);

  CompletionResult res;
  res.recovered = DenseMatrix::Constant(oracle.rows(), oracle.cols(), kUnknown);
  for (Index j = 0; j < oracle.cols(); ++j) {
    if (contains(state.cols_C, j)) {
      for (Index i : clean_rows) res.recovered(i, j) = oracle.observed_value(i, j);
      continue;
    }
    Vector rhs(static_cast<Index>(clean_R.size()));
    for (std::size_t k = 0; k < clean_R.size(); ++k) {
      rhs(static_cast<Index>(k)) = oracle.query_entry(clean_R[k], j);
    }
    const Vector coeffs = solve_least_squares(basis_block, rhs, params.tol);
    const Vector column = clean_basis_cols * coeffs;
    for (std::size_t k = 0; k < clean_rows.size(); ++k) {
      res.recovered(clean_rows[k], j) = column(static_cast<Index>(k));
    }
  }
  res.noisy_rows_hat = noisy_rows;
  std::sort(res.noisy_rows_hat.begin(), res.noisy_rows_hat.end());
  res.rows_R = state.rows_R;
  res.cols_C = state.cols_C;
  res.basis_cols = basis;
  res.query_count = oracle.unique_query_count();
  res.status = CompletionStatus::ok;
  return res;
}

CompletionResult run(QueryOracle& oracle, const CompletionParams& params) {
  const DiscoveryState state = discover(oracle, params);
  if (state.rank_hat > 0 &&
      !is_invertible(oracle.observed_submatrix(state.rows_R, state.cols_C), params.tol)) {
    return unknown_result(oracle, state, CompletionStatus::budget_exhausted);
  }
  const IndexSet flagged = identify_noisy_rows(oracle, state, params);
  if (!state.rows_R.empty() && flagged.size() == state.rows_R.size()) {
    // Every basis row looks like noise: a unit vector sits in the clean column space.
    CompletionResult res = unknown_result(oracle, state, CompletionStatus::precondition_violated);
    res.noisy_rows_hat = flagged;
    return res;
  }
  try {
    return recover(oracle, state, flagged, params);
  } catch (const DegenerateSystem&) {
    CompletionResult res = unknown_result(oracle, state, CompletionStatus::budget_exhausted);
    res.noisy_rows_hat = flagged;
    return res;
  }
}

BoundReport theorem_bound(const BoundParams& p) {
  if (p.n1 < 1 || p.n2 < 1) throw InvalidInput("theorem_bound: n1 and n2 must be positive");
  if (p.r < 0 || p.omega < 0) throw InvalidInput("theorem_bound: r and |Omega| must be nonnegative");
  if (p.omega > p.n1) throw InvalidInput("theorem_bound: |Omega| exceeds n1");
  if (p.psi_u < 1 || p.psi_v < 1) throw InvalidInput("theorem_bound: sparsity numbers must be >= 1");
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw InvalidInput("theorem_bound: epsilon must lie in (0, 1)");

  const auto n1 = static_cast<double>(p.n1);
  const auto n2 = static_cast<double>(p.n2);
  const auto r = static_cast<double>(p.r);
  const auto omega = static_cast<double>(p.omega);
  const auto psi_u = static_cast<double>(p.psi_u);
  const auto psi_v = static_cast<double>(p.psi_v);
  const double L = -std::log(p.epsilon);

  BoundReport rep;
  rep.params = p;
  rep.log_inv_epsilon = L;
  rep.proof_discovery_terms = 2.0 * n1 * (omega + 2.0 + L) + (2.0 * n1 / psi_u) * (r + omega + 2.0 + L);
  rep.proof_bound = rep.proof_discovery_terms + (r + omega) * (n1 + n2) +
                    r * std::max(0.0, n2 - r - omega);
  rep.stated_bound = (n1 + n2 - omega) * omega + (4.0 * n1 / psi_u) * (r + 2.0 + L) * n2 / psi_v +
                     2.0 * n1 * (omega + 2.0 + L);
  return rep;
}

}  // namespace amc
