#include "amc/report.hpp"

#include "amc/oracle.hpp"
#include "amc/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace amc {

ResolvedProfile resolve_profile(const GroundTruthInstance& inst, RankTolerance tol) {
  const auto clean = static_cast<Index>(inst.clean_rows().size());
  if (clean <= kReportExhaustivePsiCap && inst.n2() <= kReportExhaustivePsiCap) {
    return {compute_profile(inst, tol), "exhaustive"};
  }
  SparsityProfile p;
  p.psi_col_clean = std::max<Index>(1, clean - inst.rank_r() + 1);
  p.psi_row_clean = std::max<Index>(1, inst.n2() - inst.rank_r() + 1);
  return {p, "generic"};
}

RunReport run_instance(const GroundTruthInstance& inst, const CompletionParams& params,
                       std::uint64_t oracle_seed, std::optional<SparsityProfile> profile_override) {
  RunReport rep;
  rep.params = params;
  rep.oracle_seed = oracle_seed;
  rep.profile = profile_override ? ResolvedProfile{*profile_override, "user"}
                                 : resolve_profile(inst, params.tol);
  QueryOracle oracle(inst, oracle_seed);
  rep.result = run(oracle, params);
  rep.bound = theorem_bound({inst.n1(), inst.n2(), inst.rank_r(),
                             static_cast<Index>(inst.noisy_rows().size()),
                             rep.profile.profile.psi_col_clean, rep.profile.profile.psi_row_clean,
                             params.epsilon});
  rep.max_rel_error = verify::max_rel_error(inst, rep.result.recovered);
  return rep;
}

std::string to_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"epsilon", report.params.epsilon},
                   {"tolerance", report.params.tol.value()},
                   {"oracle_seed", report.oracle_seed},
                   {"psi_u", report.profile.profile.psi_col_clean},
                   {"psi_v", report.profile.profile.psi_row_clean},
                   {"psi_source", report.profile.source}};
  doc["status"] = std::string(to_string(report.result.status));
  doc["noisy_rows_hat"] = report.result.noisy_rows_hat;
  doc["query_count"] = report.result.query_count;
  doc["proof_bound"] = report.bound.proof_bound;
  doc["stated_bound"] = report.bound.stated_bound;
  if (std::isfinite(report.max_rel_error)) {
    doc["max_rel_error"] = report.max_rel_error;
  } else {
    doc["max_rel_error"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

namespace {

std::string join(const IndexSet& xs) {
  std::ostringstream out;
  out << '[';
  for (std::size_t k = 0; k < xs.size(); ++k) out << (k ? ", " : "") << xs[k];
  out << ']';
  return out.str();
}

}  // namespace

std::string format_summary(const RunReport& report) {
  std::ostringstream out;
  out << "# epsilon=" << report.params.epsilon << " tolerance=" << report.params.tol.value()
      << " oracle_seed=" << report.oracle_seed << '\n';
  out << "status:         " << to_string(report.result.status) << '\n';
  out << "noisy rows:     " << join(report.result.noisy_rows_hat) << '\n';
  out << "basis rows R:   " << join(report.result.rows_R) << '\n';
  out << "basis cols C:   " << join(report.result.cols_C) << '\n';
  out << "queries:        " << report.result.query_count << '\n';
  out << std::fixed << std::setprecision(2);
  out << "proof bound:    " << report.bound.proof_bound << '\n';
  out << "stated bound:   " << report.bound.stated_bound << '\n';
  out << "psi(U), psi(V): " << report.profile.profile.psi_col_clean << ", "
      << report.profile.profile.psi_row_clean << " (" << report.profile.source << ")\n";
  out << std::scientific << std::setprecision(3);
  out << "max rel error:  " << report.max_rel_error << '\n';
  return out.str();
}

std::string format_bound_report(const BoundReport& rep) {
  const BoundParams& p = rep.params;
  std::ostringstream out;
  out << "# n1=" << p.n1 << " n2=" << p.n2 << " r=" << p.r << " omega=" << p.omega
      << " psi_u=" << p.psi_u << " psi_v=" << p.psi_v << " epsilon=" << p.epsilon << '\n';
  out << std::setprecision(10);
  out << "ln(1/epsilon):          " << rep.log_inv_epsilon << '\n';
  out << "proof discovery terms:  " << rep.proof_discovery_terms << '\n';
  out << "proof bound:            " << rep.proof_bound << '\n';
  out << "stated bound:           " << rep.stated_bound << '\n';
  out << "note: the stated bound divides by psi_v and multiplies by n2; the proof's expression "
         "has no psi_v term, so the two are not expected to agree.\n";
  if (p.psi_u == 1) {
    out << "note: psi_u = 1 means a unit vector lies in the clean column space; recovery "
           "requires psi_u > 1, so the bound is formal only.\n";
  }
  return out.str();
}

}  // namespace amc
