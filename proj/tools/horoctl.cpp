#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "horo/harness/config.hpp"
#include "horo/harness/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  int threads = 1;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_path, "output CSV path")->required();
  cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "master seed (64-bit)");
}

template <class Fn>
int run_with_output(const CommonArgs& args, Fn&& fn) {
  horo::harness::ExperimentConfig cfg = horo::harness::ExperimentConfig::load(args.config_path);
  horo::harness::RunOptions opt{args.threads, args.seed};
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file " << args.out_path << "\n";
    return 1;
  }
  fn(cfg, opt, out);
  return out.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horospherical ratio averaging harness"};
  app.require_subcommand(1);

  CommonArgs ratio_args, audit_args, cj_args;
  CLI::App* ratio = app.add_subcommand("ratio-converge",
                                       "ratio averages along horoballs, one row per (sample, n)");
  add_common(ratio, ratio_args);
  CLI::App* audit = app.add_subcommand("audit",
                                       "maximal-bound, property, cocycle and skew-transfer audits");
  add_common(audit, audit_args);
  CLI::App* cj = app.add_subcommand("counterexample-j",
                                    "step-window invariance search under horosphere moves");
  add_common(cj, cj_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ratio->parsed())
      return run_with_output(ratio_args, [](auto& c, auto& o, auto& s) {
        horo::harness::run_ratio_converge(c, o, s);
      });
    if (audit->parsed())
      return run_with_output(audit_args, [](auto& c, auto& o, auto& s) {
        horo::harness::run_audit(c, o, s);
      });
    if (cj->parsed())
      return run_with_output(cj_args, [](auto& c, auto& o, auto& s) {
        horo::harness::run_counterexample_j(c, o, s);
      });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
