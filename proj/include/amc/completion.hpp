#pragma once

// Adaptive completion of a low-rank matrix whose rows are partly replaced by
// non-degenerate noise:
//   1. discover  - grow row/column sets R, C with N[R, C] invertible, probing
//                  one random entry per column per pass;
//   2. identify  - flag the rows of R whose deletion lowers rank(N[:, C]);
//   3. recover   - express every other column in a basis of clean columns.

#include "amc/linalg.hpp"

#include <limits>
#include <string_view>

namespace amc {

class QueryOracle;

struct CompletionParams {
  double epsilon = 0.1;
  RankTolerance tol{};

  void validate() const;
};

struct DiscoveryState {
  IndexSet rows_R;  // insertion order
  IndexSet cols_C;  // insertion order, paired with rows_R
  Index rank_hat = 0;
  Index zeta = 0;
  Index eta = 1;
  Index passes = 0;
};

enum class CompletionStatus { ok, precondition_violated, budget_exhausted };

[[nodiscard]] std::string_view to_string(CompletionStatus status) noexcept;

/// Marker stored in `recovered` for entries that cannot be recovered.
inline constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

struct CompletionResult {
  IndexSet noisy_rows_hat;  // ascending
  DenseMatrix recovered;    // kUnknown on rows in noisy_rows_hat
  IndexSet rows_R;
  IndexSet cols_C;
  IndexSet basis_cols;  // C' selected during recovery
  Index query_count = 0;
  CompletionStatus status = CompletionStatus::ok;
};

/// Pass budget: ceil(max((2 n1 / n2) ln(1/eps), ln(1/eps))), at least 1.
[[nodiscard]] Index compute_eta(Index n1, Index n2, double epsilon);

[[nodiscard]] DiscoveryState discover(QueryOracle& oracle, const CompletionParams& params);

/// Rows of R whose removal lowers the rank of the fully observed N[:, C].
[[nodiscard]] IndexSet identify_noisy_rows(const QueryOracle& oracle, const DiscoveryState& state,
                                           const CompletionParams& params);

/// Throws DegenerateSystem if no invertible clean basis of size |R \ E| exists in C.
[[nodiscard]] CompletionResult recover(QueryOracle& oracle, const DiscoveryState& state,
                                       const IndexSet& noisy_rows, const CompletionParams& params);

/// discover -> identify_noisy_rows -> recover; failures become statuses.
[[nodiscard]] CompletionResult run(QueryOracle& oracle, const CompletionParams& params);

struct BoundParams {
  Index n1 = 0;
  Index n2 = 0;
  Index r = 0;
  Index omega = 0;
  Index psi_u = 1;
  Index psi_v = 1;
  double epsilon = 0.1;
};

struct BoundReport {
  BoundParams params;
  double log_inv_epsilon = 0.0;
  /// 2 n1 (|O| + 2 + L) + (2 n1 / psi_u)(r + |O| + 2 + L): the two discovery phases.
  double proof_discovery_terms = 0.0;
  /// Discovery terms + full row/column queries + recovery probes.
  double proof_bound = 0.0;
  /// (n1 + n2 - |O|)|O| + (4 n1 / psi_u)(r + 2 + L) n2 / psi_v + 2 n1 (|O| + 2 + L).
  double stated_bound = 0.0;
};

[[nodiscard]] BoundReport theorem_bound(const BoundParams& p);

}  // namespace amc
