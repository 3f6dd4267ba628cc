#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace proxbench::cli;

int main(int argc, char** argv) {
  CLI::App app{"proxbench: projection and proximal algorithms for cone-and-sphere feasibility problems"};
  app.require_subcommand(1);

  BenchOptions bench;
  std::string bench_out;
  std::size_t bench_workers = 0;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark campaign from a JSON config");
  bench_cmd->add_option("--config", bench.config, "config file")->required();
  auto* bench_out_opt = bench_cmd->add_option("--out", bench_out, "output directory (overrides output.dir)");
  auto* bench_workers_opt = bench_cmd->add_option("--workers", bench_workers, "worker threads");
  auto* bench_seed_opt = bench_cmd->add_option("--seed", bench_seed, "base seed (overrides PROXBENCH_SEED)");
  bench_cmd->add_flag("--print-config", bench.print_config, "print the resolved config and exit");

  RunOptions run;
  std::uint64_t run_seed = 0;
  std::string run_trace;
  double run_tol = 0.0, run_lambda = 0.0;
  std::size_t run_max_iter = 0;
  auto* run_cmd = app.add_subcommand("run", "run one algorithm on one instance");
  run_cmd->add_option("--problem", run.problem, "problem name")->required();
  run_cmd->add_option("--algo", run.algorithm, "algorithm name")->required();
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "instance seed");
  auto* run_trace_opt = run_cmd->add_option("--trace", run_trace, "write the per-iteration trace CSV here");
  auto* run_tol_opt = run_cmd->add_option("--tol", run_tol, "iterate-change tolerance");
  auto* run_max_opt = run_cmd->add_option("--max-iter", run_max_iter, "iteration cap");
  auto* run_lambda_opt = run_cmd->add_option("--lambda", run_lambda, "relaxation parameter");
  run_cmd->add_flag("--warm-start", run.warm_start, "initialize with power iterations");

  auto* dataset_cmd = app.add_subcommand("dataset", "generate or inspect PRB1 dataset files");
  dataset_cmd->require_subcommand(1);
  DatasetGenOptions gen;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen_cmd = dataset_cmd->add_subcommand("gen", "write a generated instance");
  gen_cmd->add_option("--problem", gen.problem, "problem name")->required();
  auto* gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "instance seed");
  gen_cmd->add_option("--out", gen_out, "output file")->required();
  std::string inspect_path;
  auto* inspect_cmd = dataset_cmd->add_subcommand("inspect", "print the header and checksum of a dataset file");
  inspect_cmd->add_option("file", inspect_path, "dataset file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return guarded(
      [&] {
        if (bench_cmd->parsed()) {
          if (*bench_out_opt) bench.out_dir = bench_out;
          if (*bench_workers_opt) bench.workers = bench_workers;
          if (*bench_seed_opt) bench.seed = bench_seed;
          return cmd_bench(bench, std::cout);
        }
        if (run_cmd->parsed()) {
          if (*run_seed_opt) run.seed = run_seed;
          if (*run_trace_opt) run.trace = run_trace;
          if (*run_tol_opt) run.tol = run_tol;
          if (*run_max_opt) run.max_iter = run_max_iter;
          if (*run_lambda_opt) run.lambda = run_lambda;
          return cmd_run(run, std::cout);
        }
        if (gen_cmd->parsed()) {
          if (*gen_seed_opt) gen.seed = gen_seed;
          gen.out = gen_out;
          return cmd_dataset_gen(gen, std::cout);
        }
        return cmd_dataset_inspect(inspect_path, std::cout);
      },
      std::cerr);
}
