// amc: generate noisy-row instances, run adaptive completion, sweep seeded
// trials and print query-bound reports.

#include "amc/completion.hpp"
#include "amc/errors.hpp"
#include "amc/instances.hpp"
#include "amc/report.hpp"
#include "amc/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <thread>

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct GenerateOpts {
  amc::Index n1 = 8, n2 = 8, rank = 1, noisy = 0;
  std::string mode = "gaussian";
  std::optional<amc::Index> target_psi;
  std::uint64_t seed = 0;
  bool enforce_psi = false;
  std::string output;
};

struct RunOpts {
  std::string input;
  double epsilon = 0.1;
  double tolerance = amc::RankTolerance::kDefault;
  std::uint64_t oracle_seed = 1;
  std::string json_out;
  bool json_stdout = false;
  std::optional<amc::Index> psi_u, psi_v;
};

struct TrialsOpts {
  std::vector<amc::Index> n1{8}, n2{8}, rank{1}, noisy{0};
  std::string mode = "gaussian";
  std::optional<amc::Index> target_psi;
  double epsilon = 0.1;
  double tolerance = amc::RankTolerance::kDefault;
  amc::Index trials = 100;
  std::uint64_t seed_start = 0;
  unsigned threads = 1;
  std::string output;
};

struct BoundOpts {
  amc::BoundParams p;
};

int cmd_generate(const GenerateOpts& o) {
  amc::GeneratorConfig cfg;
  cfg.n1 = o.n1;
  cfg.n2 = o.n2;
  cfg.rank_r = o.rank;
  cfg.num_noisy = o.noisy;
  cfg.mode = amc::parse_generator_mode(o.mode);
  cfg.target_psi = o.target_psi;
  cfg.seed = o.seed;
  cfg.enforce_psi = o.enforce_psi;
  try {
    cfg.validate();
  } catch (const amc::InvalidInput& e) {
    std::cerr << "generate: " << e.what() << '\n';
    return kUsageError;
  }
  const amc::GroundTruthInstance inst = amc::generate(cfg);
  amc::save(inst, o.output);
  std::cout << "wrote " << o.output << " (" << inst.n1() << "x" << inst.n2() << ", r=" << inst.rank_r()
            << ", noisy rows=" << inst.noisy_rows().size() << ")\n";
  const auto clean = static_cast<amc::Index>(inst.clean_rows().size());
  if (clean <= amc::kReportExhaustivePsiCap && inst.n2() <= amc::kReportExhaustivePsiCap) {
    const amc::SparsityProfile p = amc::compute_profile(inst);
    std::cout << "psi_col_clean = " << p.psi_col_clean << "\npsi_row_clean = " << p.psi_row_clean << '\n';
  } else {
    std::cout << "sparsity profile skipped (dimensions above " << amc::kReportExhaustivePsiCap << ")\n";
  }
  return 0;
}

int cmd_run(const RunOpts& o) {
  const amc::GroundTruthInstance inst = amc::load(o.input);
  amc::CompletionParams params;
  params.epsilon = o.epsilon;
  params.tol = amc::RankTolerance(o.tolerance);
  params.validate();

  std::optional<amc::SparsityProfile> override_profile;
  if (o.psi_u || o.psi_v) {
    const amc::ResolvedProfile base = amc::resolve_profile(inst, params.tol);
    override_profile = base.profile;
    if (o.psi_u) override_profile->psi_col_clean = *o.psi_u;
    if (o.psi_v) override_profile->psi_row_clean = *o.psi_v;
  }
  const amc::RunReport rep = amc::run_instance(inst, params, o.oracle_seed, override_profile);
  const std::string json = amc::to_json(rep);
  if (o.json_stdout) {
    std::cout << json;
  } else {
    std::cout << amc::format_summary(rep);
  }
  if (!o.json_out.empty()) {
    std::ofstream out(o.json_out, std::ios::binary);
    if (!out) throw amc::Error("cannot open '" + o.json_out + "' for writing");
    out << json;
  }
  return 0;
}

int cmd_trials(const TrialsOpts& o) {
  if (o.trials <= 0) {
    std::cerr << "trials: --trials must be positive\n";
    return kUsageError;
  }
  amc::CompletionParams params;
  params.epsilon = o.epsilon;
  params.tol = amc::RankTolerance(o.tolerance);
  params.validate();

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.trials));
  std::iota(seeds.begin(), seeds.end(), o.seed_start);

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw amc::Error("cannot open '" + o.output + "' for writing");
  }
  std::ostream& out = o.output.empty() ? std::cout : file;
  out << amc::verify::kTrialStatsCsvHeader << '\n';

  for (amc::Index n1 : o.n1) {
    for (amc::Index n2 : o.n2) {
      for (amc::Index r : o.rank) {
        for (amc::Index noisy : o.noisy) {
          amc::GeneratorConfig cfg;
          cfg.n1 = n1;
          cfg.n2 = n2;
          cfg.rank_r = r;
          cfg.num_noisy = noisy;
          cfg.mode = amc::parse_generator_mode(o.mode);
          cfg.target_psi = o.target_psi;
          cfg.enforce_psi = true;
          try {
            cfg.validate();
          } catch (const amc::InvalidInput& e) {
            std::cerr << "trials: skipping n1=" << n1 << " n2=" << n2 << " r=" << r
                      << " noisy=" << noisy << ": " << e.what() << '\n';
            continue;
          }
          const auto stats = amc::verify::estimate_success_rate(cfg, params, seeds, o.threads);
          out << amc::verify::to_csv_row(stats) << '\n';
        }
      }
    }
  }
  return 0;
}

int cmd_bound(const BoundOpts& o) {
  std::cout << amc::format_bound_report(amc::theorem_bound(o.p));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive completion of low-rank matrices with noisy rows"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Generate a ground-truth instance file");
  g->add_option("--n1", gen.n1, "Row count")->required();
  g->add_option("--n2", gen.n2, "Column count")->required();
  g->add_option("--rank", gen.rank, "Rank of M")->required();
  g->add_option("--noisy", gen.noisy, "Number of noisy rows")->default_val(0);
  g->add_option("--mode", gen.mode, "gaussian | sparse-basis")->check(CLI::IsMember({"gaussian", "sparse-basis"}));
  g->add_option("--target-psi", gen.target_psi, "Support size of the sparse basis");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_flag("--enforce-psi", gen.enforce_psi, "Reject draws with a unit vector in the clean column space");
  g->add_option("-o,--output", gen.output, "Instance JSON path")->required();

  RunOpts run;
  auto* r = app.add_subcommand("run", "Run completion on an instance file");
  r->add_option("-i,--instance", run.input, "Instance JSON path")->required()->check(CLI::ExistingFile);
  r->add_option("--epsilon", run.epsilon, "Failure probability parameter")->default_val(0.1);
  r->add_option("--tolerance", run.tolerance, "Relative rank tolerance")->default_val(amc::RankTolerance::kDefault);
  r->add_option("--oracle-seed", run.oracle_seed, "Seed of the random row draws")->default_val(1);
  r->add_option("--json", run.json_out, "Also write the JSON result here");
  r->add_flag("--print-json", run.json_stdout, "Print JSON instead of the summary");
  r->add_option("--psi-u", run.psi_u, "Override psi(U) in the bound");
  r->add_option("--psi-v", run.psi_v, "Override psi(V) in the bound");

  TrialsOpts tr;
  auto* t = app.add_subcommand("trials", "Seeded Monte Carlo sweep; one CSV row per configuration");
  t->add_option("--n1", tr.n1, "Row counts")->expected(1, -1);
  t->add_option("--n2", tr.n2, "Column counts")->expected(1, -1);
  t->add_option("--rank", tr.rank, "Ranks")->expected(1, -1);
  t->add_option("--noisy", tr.noisy, "Noisy row counts")->expected(1, -1);
  t->add_option("--mode", tr.mode, "gaussian | sparse-basis")->check(CLI::IsMember({"gaussian", "sparse-basis"}));
  t->add_option("--target-psi", tr.target_psi, "Support size of the sparse basis");
  t->add_option("--epsilon", tr.epsilon, "Failure probability parameter")->default_val(0.1);
  t->add_option("--tolerance", tr.tolerance, "Relative rank tolerance")->default_val(amc::RankTolerance::kDefault);
  t->add_option("--trials", tr.trials, "Trials per configuration")->default_val(100);
  t->add_option("--seed-start", tr.seed_start, "First seed; seeds are consecutive")->default_val(0);
  t->add_option("--threads", tr.threads, "Worker threads")->default_val(std::max(1U, std::thread::hardware_concurrency()));
  t->add_option("-o,--output", tr.output, "CSV path (stdout if omitted)");

  BoundOpts bd;
  auto* b = app.add_subcommand("bound", "Print the query-count bounds");
  b->add_option("--n1", bd.p.n1, "Row count")->required();
  b->add_option("--n2", bd.p.n2, "Column count")->required();
  b->add_option("--rank", bd.p.r, "Rank")->required();
  b->add_option("--omega", bd.p.omega, "Number of noisy rows")->required();
  b->add_option("--psi-u", bd.p.psi_u, "Sparsity number of the clean column space")->required();
  b->add_option("--psi-v", bd.p.psi_v, "Sparsity number of the clean row space")->required();
  b->add_option("--epsilon", bd.p.epsilon, "Failure probability parameter")->default_val(0.1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run);
    if (*t) return cmd_trials(tr);
    if (*b) return cmd_bound(bd);
  } catch (const amc::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
