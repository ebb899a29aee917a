#include "amc/verify.hpp"

#include "amc/errors.hpp"
#include "amc/oracle.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace amc::verify {

namespace mp = boost::multiprecision;

IndexSet oracle_noisy_rows(const DenseMatrix& n_full, RankTolerance tol) {
  const Index full = numerical_rank(n_full, tol);
  IndexSet out;
  for (Index i = 0; i < n_full.rows(); ++i) {
    DenseMatrix reduced(n_full.rows() - 1, n_full.cols());
    Index dst = 0;
    for (Index k = 0; k < n_full.rows(); ++k) {
      if (k != i) reduced.row(dst++) = n_full.row(k);
    }
    if (numerical_rank(reduced, tol) < full) out.push_back(i);
  }
  return out;
}

namespace {

mp::cpp_rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InvalidInput("oracle_exact_rank: non-finite entry");
  if (x == 0.0) return 0;
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  mp::cpp_rational q = mp::cpp_int(scaled);
  const int shift = exp - 53;
  mp::cpp_int pow2 = 1;
  pow2 <<= std::abs(shift);
  if (shift >= 0) return q * pow2;
  return q / pow2;
}

}  // namespace

Index oracle_exact_rank(const DenseMatrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  std::vector<std::vector<mp::cpp_rational>> a(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a[static_cast<std::size_t>(i)].push_back(exact_rational(m(i, j)));
  }
  Index rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    auto pivot = static_cast<std::size_t>(rank);
    while (pivot < a.size() && a[pivot][static_cast<std::size_t>(c)] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[static_cast<std::size_t>(rank)]);
    const auto& prow = a[static_cast<std::size_t>(rank)];
    for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < a.size(); ++i) {
      if (a[i][static_cast<std::size_t>(c)] == 0) continue;
      const mp::cpp_rational f = a[i][static_cast<std::size_t>(c)] / prow[static_cast<std::size_t>(c)];
      for (std::size_t j = static_cast<std::size_t>(c); j < static_cast<std::size_t>(cols); ++j) {
        a[i][j] -= f * prow[j];
      }
    }
    ++rank;
  }
  return rank;
}

bool ei_in_colspace_append(const DenseMatrix& m, Index row, RankTolerance tol) {
  if (row < 0 || row >= m.rows()) throw InvalidInput("ei_in_colspace_append: row out of range");
  DenseMatrix widened(m.rows(), m.cols() + 1);
  widened.leftCols(m.cols()) = m;
  widened.col(m.cols()).setZero();
  widened(row, m.cols()) = 1.0;
  // Rank is scale-invariant per column, but the relative cutoff is not:
  // scale e_row to the magnitude of m so it does not dominate sigma_max.
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale > 0.0) widened.col(m.cols()) *= scale;
  return numerical_rank(widened, tol) == numerical_rank(m, tol);
}

Index sparsity_number_bitmask(const SubspaceBasis& basis) {
  const Index n = basis.ambient_dim();
  const Index d = basis.dim();
  if (d == 0) throw InvalidInput("sparsity_number_bitmask: zero-dimensional span");
  if (n > kMaxSparsityAmbient) throw CapacityError("sparsity_number_bitmask: ambient dimension too large");
  Index best = n - d + 1;  // any support of that size leaves < d rows
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    const auto size = static_cast<Index>(std::popcount(mask));
    if (size >= best) continue;
    IndexSet outside;
    for (Index i = 0; i < n; ++i) {
      if (!((mask >> i) & 1U)) outside.push_back(i);
    }
    DenseMatrix rows(static_cast<Index>(outside.size()), d);
    for (std::size_t k = 0; k < outside.size(); ++k) {
      rows.row(static_cast<Index>(k)) = basis.vectors().row(outside[k]);
    }
    if (numerical_rank(rows, basis.tolerance()) < d) best = size;
  }
  return best;
}

std::uint64_t oracle_seed_for(std::uint64_t instance_seed) noexcept {
  // splitmix64 finalizer
  std::uint64_t z = instance_seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double max_rel_error(const GroundTruthInstance& inst, const DenseMatrix& recovered) {
  const IndexSet clean = inst.clean_rows();
  double scale = 0.0;
  for (Index i : clean) scale = std::max(scale, inst.m().row(i).cwiseAbs().maxCoeff());
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (Index i : clean) {
    for (Index j = 0; j < inst.n2(); ++j) {
      const double v = recovered(i, j);
      if (std::isnan(v)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(v - inst.m()(i, j)) / scale);
    }
  }
  return worst;
}

TrialOutcome run_trial(const GroundTruthInstance& inst, const CompletionParams& params,
                       std::uint64_t oracle_seed, Index psi_u, Index psi_v) {
  QueryOracle oracle(inst, oracle_seed);
  const CompletionResult res = run(oracle, params);

  TrialOutcome out;
  out.instance_seed = inst.seed();
  out.oracle_seed = oracle_seed;
  out.status = res.status;
  out.identified = res.noisy_rows_hat == inst.noisy_rows();
  out.max_rel_error = max_rel_error(inst, res.recovered);
  out.query_count = res.query_count;
  out.proof_bound = theorem_bound({inst.n1(), inst.n2(), inst.rank_r(),
                                   static_cast<Index>(inst.noisy_rows().size()), psi_u, psi_v,
                                   params.epsilon})
                        .proof_bound;
  return out;
}

std::string to_csv_row(const TrialStats& s) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << s.n1 << ',' << s.n2 << ',' << s.r << ',' << s.omega << ',' << s.psi_u << ',' << s.epsilon
      << ',' << s.trials << ',' << s.successes << ',' << s.mean_queries << ',' << s.proof_bound
      << ',' << s.bound_violations;
  return out.str();
}

TrialStats parse_trial_stats_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() != 11) {
    throw InvalidInput("trial stats row needs 11 fields, got " + std::to_string(fields.size()));
  }
  TrialStats s;
  try {
    s.n1 = std::stoll(fields[0]);
    s.n2 = std::stoll(fields[1]);
    s.r = std::stoll(fields[2]);
    s.omega = std::stoll(fields[3]);
    s.psi_u = std::stoll(fields[4]);
    s.epsilon = std::stod(fields[5]);
    s.trials = std::stoll(fields[6]);
    s.successes = std::stoll(fields[7]);
    s.mean_queries = std::stod(fields[8]);
    s.proof_bound = std::stod(fields[9]);
    s.bound_violations = std::stoll(fields[10]);
  } catch (const std::logic_error& e) {
    throw InvalidInput(std::string("trial stats row has a non-numeric field: ") + e.what());
  }
  return s;
}

std::vector<TrialOutcome> run_trials(const GeneratorConfig& config, const CompletionParams& params,
                                     std::span<const std::uint64_t> seeds, unsigned threads) {
  const SparsityProfile profile = generic_profile(config);
  std::vector<TrialOutcome> outcomes(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < seeds.size(); k = next++) {
      try {
        GeneratorConfig cfg = config;
        cfg.seed = seeds[k];
        const GroundTruthInstance inst = generate(cfg);
        outcomes[k] = run_trial(inst, params, oracle_seed_for(seeds[k]), profile.psi_col_clean,
                                profile.psi_row_clean);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

TrialStats estimate_success_rate(const GeneratorConfig& config, const CompletionParams& params,
                                 std::span<const std::uint64_t> seeds, unsigned threads) {
  if (seeds.empty()) throw InvalidInput("estimate_success_rate: no trials requested");
  const std::vector<TrialOutcome> outcomes = run_trials(config, params, seeds, threads);
  const SparsityProfile profile = generic_profile(config);

  TrialStats s;
  s.n1 = config.n1;
  s.n2 = config.n2;
  s.r = config.rank_r;
  s.omega = config.num_noisy;
  s.psi_u = profile.psi_col_clean;
  s.epsilon = params.epsilon;
  s.trials = static_cast<Index>(outcomes.size());
  s.proof_bound = theorem_bound({config.n1, config.n2, config.rank_r, config.num_noisy,
                                 profile.psi_col_clean, profile.psi_row_clean, params.epsilon})
                      .proof_bound;
  double total = 0.0;
  for (const auto& o : outcomes) {
    s.successes += o.success() ? 1 : 0;
    s.bound_violations += o.bound_violation() ? 1 : 0;
    total += static_cast<double>(o.query_count);
  }
  s.mean_queries = total / static_cast<double>(outcomes.size());
  return s;
}

DiscoveryState make_mid_state(const GroundTruthInstance& inst, Index k, std::uint64_t seed,
                              RankTolerance tol) {
  IndexSet clean = inst.clean_rows();
  if (k < 0 || k > std::min(static_cast<Index>(clean.size()), inst.n2())) {
    throw InvalidInput("make_mid_state: size out of range");
  }
  IndexSet cols(static_cast<std::size_t>(inst.n2()));
  std::iota(cols.begin(), cols.end(), Index{0});
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::shuffle(clean.begin(), clean.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    DiscoveryState st;
    st.rows_R.assign(clean.begin(), clean.begin() + k);
    st.cols_C.assign(cols.begin(), cols.begin() + k);
    st.rank_hat = k;
    if (k == 0 || is_invertible(submatrix(inst.observed(), st.rows_R, st.cols_C), tol)) return st;
  }
  throw GenerationError("make_mid_state: no invertible block found");
}

DetectionEstimate estimate_detection_probability(const GroundTruthInstance& inst,
                                                 const DiscoveryState& mid_state, Index probes,
                                                 std::uint64_t seed, RankTolerance tol) {
  if (probes <= 0) throw InvalidInput("estimate_detection_probability: probes must be positive");
  const DenseMatrix& n = inst.observed();
  const auto k = static_cast<Index>(mid_state.rows_R.size());
  if (k >= inst.rank_r() + static_cast<Index>(inst.noisy_rows().size())) {
    throw InvalidInput("estimate_detection_probability: state already spans the full rank");
  }
  if (static_cast<Index>(mid_state.cols_C.size()) != k ||
      (k > 0 && !is_invertible(submatrix(n, mid_state.rows_R, mid_state.cols_C), tol))) {
    throw InvalidInput("estimate_detection_probability: mid state is not an invertible block");
  }

  IndexSet useful;
  const DenseMatrix n_C = select_cols(n, mid_state.cols_C);
  for (Index j = 0; j < inst.n2(); ++j) {
    if (std::find(mid_state.cols_C.begin(), mid_state.cols_C.end(), j) != mid_state.cols_C.end()) {
      continue;
    }
    DenseMatrix widened(n.rows(), k + 1);
    widened.leftCols(k) = n_C;
    widened.col(k) = n.col(j);
    if (numerical_rank(widened, tol) == k + 1) useful.push_back(j);
  }
  if (useful.empty()) throw InvalidInput("estimate_detection_probability: no column can raise the rank");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick_row(0, inst.n1() - 1);
  std::uniform_int_distribution<std::size_t> pick_col(0, useful.size() - 1);
  DetectionEstimate est;
  est.probes = probes;
  IndexSet rows = mid_state.rows_R;
  IndexSet cols = mid_state.cols_C;
  rows.push_back(0);
  cols.push_back(0);
  for (Index p = 0; p < probes; ++p) {
    const Index i = pick_row(rng);
    const Index j = useful[pick_col(rng)];
    if (std::find(mid_state.rows_R.begin(), mid_state.rows_R.end(), i) != mid_state.rows_R.end()) {
      continue;
    }
    rows.back() = i;
    cols.back() = j;
    if (is_invertible(submatrix(n, rows, cols), tol)) ++est.successes;
  }
  est.rate = static_cast<double>(est.successes) / static_cast<double>(probes);
  est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(probes));
  return est;
}

}  // namespace amc::verify
