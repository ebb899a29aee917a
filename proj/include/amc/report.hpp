#pragma once

// Result formatting shared by the command-line tool and the tests.

#include "amc/completion.hpp"
#include "amc/instances.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace amc {

/// Ambient dimension up to which reports compute sparsity numbers exhaustively.
inline constexpr Index kReportExhaustivePsiCap = 16;

struct ResolvedProfile {
  SparsityProfile profile;
  /// "exhaustive", "generic" (n - d + 1, an upper bound) or "user".
  std::string source;
};

/// Exhaustive profile when both ambient dimensions are within the report cap,
/// otherwise the generic-position value.
[[nodiscard]] ResolvedProfile resolve_profile(const GroundTruthInstance& inst, RankTolerance tol = {});

struct RunReport {
  CompletionParams params;
  std::uint64_t oracle_seed = 0;
  CompletionResult result;
  ResolvedProfile profile;
  BoundReport bound;
  double max_rel_error = 0.0;
};

[[nodiscard]] RunReport run_instance(const GroundTruthInstance& inst, const CompletionParams& params,
                                     std::uint64_t oracle_seed,
                                     std::optional<SparsityProfile> profile_override = std::nullopt);

/// {status, noisy_rows_hat, query_count, proof_bound, stated_bound, max_rel_error}
/// plus a `params` header. Byte-identical for identical inputs.
[[nodiscard]] std::string to_json(const RunReport& report);

[[nodiscard]] std::string format_summary(const RunReport& report);

[[nodiscard]] std::string format_bound_report(const BoundReport& report);

}  // namespace amc
