#pragma once

// Brute-force and statistical cross-checks for the completion pipeline.
// Nothing here calls into the decision logic of completion.cpp except the
// top-level `run`, whose output is what gets judged.

#include "amc/completion.hpp"
#include "amc/instances.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace amc::verify {

/// Rows of the full matrix whose deletion lowers its rank.
[[nodiscard]] IndexSet oracle_noisy_rows(const DenseMatrix& n_full, RankTolerance tol = {});

/// Rank over Q of the exact dyadic rationals the doubles represent.
[[nodiscard]] Index oracle_exact_rank(const DenseMatrix& m);

/// e_row in colspace(m) decided by appending e_row as a column.
[[nodiscard]] bool ei_in_colspace_append(const DenseMatrix& m, Index row, RankTolerance tol = {});

/// Sparsity number by scanning every support bitmask in increasing numeric order.
[[nodiscard]] Index sparsity_number_bitmask(const SubspaceBasis& basis);

/// Deterministic oracle seed paired with an instance seed.
[[nodiscard]] std::uint64_t oracle_seed_for(std::uint64_t instance_seed) noexcept;

/// max |recovered - M| / max |M| over rows outside the true noisy set;
/// +inf if any such entry is Unknown.
[[nodiscard]] double max_rel_error(const GroundTruthInstance& inst, const DenseMatrix& recovered);

inline constexpr double kExactRecoveryTol = 1e-8;

struct TrialOutcome {
  std::uint64_t instance_seed = 0;
  std::uint64_t oracle_seed = 0;
  CompletionStatus status = CompletionStatus::ok;
  bool identified = false;  // noisy_rows_hat == gamma
  double max_rel_error = 0.0;
  Index query_count = 0;
  double proof_bound = 0.0;

  [[nodiscard]] bool success() const noexcept {
    return identified && max_rel_error <= kExactRecoveryTol;
  }
  [[nodiscard]] bool bound_violation() const noexcept {
    return static_cast<double>(query_count) > proof_bound;
  }
};

/// Full pipeline on one instance; `psi_u`, `psi_v` feed the proof bound.
[[nodiscard]] TrialOutcome run_trial(const GroundTruthInstance& inst, const CompletionParams& params,
                                     std::uint64_t oracle_seed, Index psi_u, Index psi_v);

struct TrialStats {
  Index n1 = 0;
  Index n2 = 0;
  Index r = 0;
  Index omega = 0;
  Index psi_u = 0;
  double epsilon = 0.0;
  Index trials = 0;
  Index successes = 0;
  double mean_queries = 0.0;
  double proof_bound = 0.0;
  Index bound_violations = 0;

  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

inline constexpr const char* kTrialStatsCsvHeader =
    "n1,n2,r,omega,psi_u,epsilon,trials,successes,mean_queries,proof_bound,bound_violations";

[[nodiscard]] std::string to_csv_row(const TrialStats& stats);
[[nodiscard]] TrialStats parse_trial_stats_csv_row(const std::string& line);

/// One trial per seed on `config` with that seed; runs on up to `threads`
/// workers, result order follows `seeds`.
[[nodiscard]] std::vector<TrialOutcome> run_trials(const GeneratorConfig& config,
                                                   const CompletionParams& params,
                                                   std::span<const std::uint64_t> seeds,
                                                   unsigned threads = 1);

[[nodiscard]] TrialStats estimate_success_rate(const GeneratorConfig& config,
                                               const CompletionParams& params,
                                               std::span<const std::uint64_t> seeds,
                                               unsigned threads = 1);

struct DetectionEstimate {
  Index probes = 0;
  Index successes = 0;
  double rate = 0.0;
  double std_error = 0.0;
};

/// Random (R, C) of size k on clean rows with N[R, C] invertible.
[[nodiscard]] DiscoveryState make_mid_state(const GroundTruthInstance& inst, Index k,
                                            std::uint64_t seed, RankTolerance tol = {});

/// Frequency with which one probe (uniform row, uniform column that can still
/// raise rank(N[:, C])) extends N[R, C] to an invertible square.
[[nodiscard]] DetectionEstimate estimate_detection_probability(const GroundTruthInstance& inst,
                                                               const DiscoveryState& mid_state,
                                                               Index probes, std::uint64_t seed,
                                                               RankTolerance tol = {});

}  // namespace amc::verify
