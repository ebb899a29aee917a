#pragma once

// Ground-truth problem instances: a rank-r matrix M, a sparse set of noisy
// rows and the additive noise on those rows. N = M + noise is what the
// completion algorithm is allowed to query.

#include "amc/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace amc {

enum class GeneratorMode { gaussian, sparse_basis };

[[nodiscard]] std::string_view to_string(GeneratorMode mode) noexcept;
[[nodiscard]] GeneratorMode parse_generator_mode(std::string_view text);

struct GeneratorConfig {
  Index n1 = 0;
  Index n2 = 0;
  Index rank_r = 1;
  Index num_noisy = 0;
  GeneratorMode mode = GeneratorMode::gaussian;
  std::optional<Index> target_psi;  // sparse_basis only
  std::uint64_t seed = 0;
  /// Reject draws whose clean column space contains a standard basis vector.
  bool enforce_psi = false;
  RankTolerance tol{};

  /// Throws InvalidInput when the dimensions cannot yield a well-posed instance.
  void validate() const;
};

struct SparsityProfile {
  Index psi_col_clean = 0;
  Index psi_row_clean = 0;

  friend bool operator==(const SparsityProfile&, const SparsityProfile&) = default;
};

class GroundTruthInstance {
 public:
  /// Checks every invariant except generic-position rank of N, which is
  /// only enforced at generation time.
  GroundTruthInstance(DenseMatrix m, IndexSet noisy_rows, DenseMatrix noise, Index rank_r,
                      std::uint64_t seed, RankTolerance tol = {});

  [[nodiscard]] Index n1() const noexcept { return m_.rows(); }
  [[nodiscard]] Index n2() const noexcept { return m_.cols(); }
  [[nodiscard]] Index rank_r() const noexcept { return rank_r_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const DenseMatrix& m() const noexcept { return m_; }
  [[nodiscard]] const DenseMatrix& noise() const noexcept { return noise_; }
  [[nodiscard]] const DenseMatrix& observed() const noexcept { return n_; }
  /// Ascending.
  [[nodiscard]] const IndexSet& noisy_rows() const noexcept { return noisy_rows_; }
  [[nodiscard]] IndexSet clean_rows() const { return complement(n1(), noisy_rows_); }
  [[nodiscard]] DenseMatrix clean_m() const { return select_rows(m_, clean_rows()); }

 private:
  DenseMatrix m_;
  IndexSet noisy_rows_;
  DenseMatrix noise_;
  DenseMatrix n_;
  Index rank_r_;
  std::uint64_t seed_;
};

inline constexpr int kMaxGenerationAttempts = 16;

/// Deterministic in `config.seed`. Redraws (up to kMaxGenerationAttempts)
/// until the rank invariants hold; throws GenerationError otherwise.
[[nodiscard]] GroundTruthInstance generate(const GeneratorConfig& config);

/// Exhaustive sparsity numbers of the clean-row column and row spaces of M.
[[nodiscard]] SparsityProfile compute_profile(const GroundTruthInstance& inst,
                                              RankTolerance tol = {});

/// Sparsity profile the construction attains almost surely: a generic
/// d-dimensional subspace of R^n has sparsity n - d + 1, the disjoint-support
/// construction has sparsity target_psi.
[[nodiscard]] SparsityProfile generic_profile(const GeneratorConfig& config);

void save(const GroundTruthInstance& inst, const std::filesystem::path& path);
[[nodiscard]] GroundTruthInstance load(const std::filesystem::path& path);

/// JSON text of the instance file (same bytes `save` writes).
[[nodiscard]] std::string to_json_text(const GroundTruthInstance& inst);
[[nodiscard]] GroundTruthInstance from_json_text(std::string_view text);

}  // namespace amc
