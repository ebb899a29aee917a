#include "amc/instances.hpp"

#include "amc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace amc {

std::string_view to_string(GeneratorMode mode) noexcept {
  switch (mode) {
    case GeneratorMode::gaussian:
      return "gaussian";
    case GeneratorMode::sparse_basis:
      return "sparse-basis";
  }
  return "unknown";
}

GeneratorMode parse_generator_mode(std::string_view text) {
  if (text == "gaussian") return GeneratorMode::gaussian;
  if (text == "sparse-basis") return GeneratorMode::sparse_basis;
  throw InvalidInput("unknown generator mode '" + std::string(text) + "'");
}

void GeneratorConfig::validate() const {
  if (n1 < 1 || n2 < 1) throw InvalidInput("n1 and n2 must be positive");
  if (rank_r < 1) throw InvalidInput("rank must be positive");
  if (num_noisy < 0 || num_noisy >= n1) throw InvalidInput("noisy row count must lie in [0, n1)");
  const Index clean = n1 - num_noisy;
  if (rank_r + num_noisy > std::min(clean, n2)) {
    throw InvalidInput("infeasible dimensions: rank + noisy = " + std::to_string(rank_r + num_noisy) +
                       " exceeds min(n1 - noisy, n2) = " + std::to_string(std::min(clean, n2)));
  }
  if (mode == GeneratorMode::sparse_basis) {
    if (!target_psi) throw InvalidInput("sparse-basis mode requires target_psi");
    if (*target_psi < 2) throw InvalidInput("target_psi must be at least 2");
    if (rank_r * *target_psi > clean) {
      throw InvalidInput("infeasible sparse basis: rank * target_psi exceeds the clean row count");
    }
  } else if (target_psi) {
    throw InvalidInput("target_psi only applies to sparse-basis mode");
  }
}

GroundTruthInstance::GroundTruthInstance(DenseMatrix m, IndexSet noisy_rows, DenseMatrix noise,
                                         Index rank_r, std::uint64_t seed, RankTolerance tol)
    : m_(std::move(m)),
      noisy_rows_(std::move(noisy_rows)),
      noise_(std::move(noise)),
      rank_r_(rank_r),
      seed_(seed) {
  if (m_.size() == 0) throw InvalidInput("instance matrix is empty");
  if (noise_.rows() != m_.rows() || noise_.cols() != m_.cols()) {
    throw InvalidInput("noise dimensions differ from M");
  }
  if (!m_.allFinite() || !noise_.allFinite()) throw InvalidInput("instance has non-finite entries");
  if (static_cast<Index>(noisy_rows_.size()) > m_.rows()) {
    throw InvalidInput("more noisy rows than rows");
  }
  std::sort(noisy_rows_.begin(), noisy_rows_.end());
  if (std::adjacent_find(noisy_rows_.begin(), noisy_rows_.end()) != noisy_rows_.end()) {
    throw InvalidInput("duplicate noisy row index");
  }
  std::vector<bool> is_noisy(static_cast<std::size_t>(m_.rows()), false);
  for (Index i : noisy_rows_) {
    if (i < 0 || i >= m_.rows()) throw InvalidInput("noisy row index out of range");
    is_noisy[static_cast<std::size_t>(i)] = true;
  }
  for (Index i = 0; i < m_.rows(); ++i) {
    const bool zero = noise_.row(i).isZero(0.0);
    if (zero == is_noisy[static_cast<std::size_t>(i)]) {
      throw InvalidInput("noise row " + std::to_string(i) +
                         (zero ? " is zero but listed as noisy" : " is nonzero but not listed as noisy"));
    }
  }
  if (rank_r_ < 0 || numerical_rank(m_, tol) != rank_r_) {
    throw InvalidInput("rank of M differs from the declared rank " + std::to_string(rank_r_));
  }
  n_ = m_ + noise_;
}

namespace {

DenseMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
  }
  return out;
}

struct Draw {
  DenseMatrix m;
  DenseMatrix noise;
  IndexSet gamma;
};

Draw draw_once(const GeneratorConfig& cfg, std::mt19937_64& rng) {
  std::vector<Index> rows(static_cast<std::size_t>(cfg.n1));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  IndexSet gamma(rows.begin(), rows.begin() + cfg.num_noisy);
  std::sort(gamma.begin(), gamma.end());
  const IndexSet clean = complement(cfg.n1, gamma);

  DenseMatrix left;
  if (cfg.mode == GeneratorMode::gaussian) {
    left = gaussian_matrix(cfg.n1, cfg.rank_r, rng);
  } else {
    // Clean rows: r columns with pairwise disjoint supports of size target_psi.
    // Noisy rows of M are unconstrained.
    const Index psi = *cfg.target_psi;
    left = DenseMatrix::Zero(cfg.n1, cfg.rank_r);
    std::vector<Index> order = clean;
    std::shuffle(order.begin(), order.end(), rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index k = 0; k < cfg.rank_r; ++k) {
      for (Index t = 0; t < psi; ++t) {
        left(order[static_cast<std::size_t>(k * psi + t)], k) = normal(rng);
      }
    }
    for (Index i : gamma) {
      for (Index k = 0; k < cfg.rank_r; ++k) left(i, k) = normal(rng);
    }
  }
  const DenseMatrix right = gaussian_matrix(cfg.rank_r, cfg.n2, rng);

  Draw d;
  d.m = left * right;
  d.noise = DenseMatrix::Zero(cfg.n1, cfg.n2);
  const DenseMatrix noise_rows = gaussian_matrix(cfg.num_noisy, cfg.n2, rng);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    d.noise.row(gamma[k]) = noise_rows.row(static_cast<Index>(k));
  }
  d.gamma = std::move(gamma);
  return d;
}

bool draw_is_acceptable(const GeneratorConfig& cfg, const Draw& d) {
  if (numerical_rank(d.m, cfg.tol) != cfg.rank_r) return false;
  const DenseMatrix clean_m = select_rows(d.m, complement(cfg.n1, d.gamma));
  if (numerical_rank(clean_m, cfg.tol) != cfg.rank_r) return false;
  if (numerical_rank(d.m + d.noise, cfg.tol) != cfg.rank_r + cfg.num_noisy) return false;
  if (cfg.enforce_psi && colspace_contains_unit_vector(clean_m, cfg.tol)) return false;
  return true;
}

}  // namespace

GroundTruthInstance generate(const GeneratorConfig& config) {
  config.validate();
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL);
    Draw d = draw_once(config, rng);
    if (draw_is_acceptable(config, d)) {
      return GroundTruthInstance(std::move(d.m), std::move(d.gamma), std::move(d.noise),
                                 config.rank_r, config.seed, config.tol);
    }
  }
  throw GenerationError("no acceptable draw after " + std::to_string(kMaxGenerationAttempts) +
                        " attempts (seed " + std::to_string(config.seed) + ")");
}

SparsityProfile compute_profile(const GroundTruthInstance& inst, RankTolerance tol) {
  const DenseMatrix clean = inst.clean_m();
  SparsityProfile p;
  p.psi_col_clean = sparsity_number(SubspaceBasis::column_space(clean, tol));
  p.psi_row_clean = sparsity_number(SubspaceBasis::column_space(clean.transpose(), tol));
  return p;
}

SparsityProfile generic_profile(const GeneratorConfig& config) {
  config.validate();
  const Index clean = config.n1 - config.num_noisy;
  SparsityProfile p;
  p.psi_col_clean = config.mode == GeneratorMode::sparse_basis ? *config.target_psi
                                                               : clean - config.rank_r + 1;
  p.psi_row_clean = config.n2 - config.rank_r + 1;
  return p;
}

namespace {

using nlohmann::json;

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& rows, Index n1, Index n2, const char* name) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n1) {
    throw MalformedFile(std::string("field '") + name + "' does not have n1 rows");
  }
  DenseMatrix m(n1, n2);
  for (Index i = 0; i < n1; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n2) {
      throw MalformedFile(std::string("field '") + name + "' row " + std::to_string(i) +
                          " does not have n2 entries");
    }
    for (Index j = 0; j < n2; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw MalformedFile(std::string("non-numeric entry in '") + name + "'");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

std::string to_json_text(const GroundTruthInstance& inst) {
  json doc;
  doc["n1"] = inst.n1();
  doc["n2"] = inst.n2();
  doc["r"] = inst.rank_r();
  doc["gamma"] = inst.noisy_rows();
  doc["seed"] = inst.seed();
  doc["m"] = matrix_to_json(inst.m());
  doc["noise"] = matrix_to_json(inst.noise());
  return doc.dump() + "\n";
}

GroundTruthInstance from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedFile(std::string("instance file is not valid JSON: ") + e.what());
  }
  try {
    const auto n1 = doc.at("n1").get<Index>();
    const auto n2 = doc.at("n2").get<Index>();
    const auto r = doc.at("r").get<Index>();
    const auto gamma = doc.at("gamma").get<IndexSet>();
    const auto seed = doc.at("seed").get<std::uint64_t>();
    if (n1 < 1 || n2 < 1) throw MalformedFile("n1 and n2 must be positive");
    if (static_cast<Index>(gamma.size()) > n1) {
      throw MalformedFile("gamma lists " + std::to_string(gamma.size()) + " rows but n1 = " +
                          std::to_string(n1));
    }
    DenseMatrix m = matrix_from_json(doc.at("m"), n1, n2, "m");
    DenseMatrix noise = matrix_from_json(doc.at("noise"), n1, n2, "noise");
    return GroundTruthInstance(std::move(m), gamma, std::move(noise), r, seed);
  } catch (const json::exception& e) {
    throw MalformedFile(std::string("instance file has missing or mistyped fields: ") + e.what());
  } catch (const InvalidInput& e) {
    throw MalformedFile(std::string("instance file violates instance invariants: ") + e.what());
  }
}

void save(const GroundTruthInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << to_json_text(inst);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

GroundTruthInstance load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

}  // namespace amc
