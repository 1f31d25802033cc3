// Command-line front end: run | sweep | lemma-test | linear-verify | report.

#include <CLI11.hpp>

#include "dampedwave/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulator and estimate-verification harness for the "
               "damped focusing nonlinear Klein-Gordon equation"};
  app.require_subcommand(1);

  dampedwave::CommandOptions opts;
  std::string config_path, report_dir;
  int lemma_count = 240;
  std::uint64_t lemma_seed = 12345;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opts.out_override, "Output directory (DAMPEDWAVE_OUT overrides)");
    cmd->add_option("--threads", opts.threads, "Worker threads for sweeps");
    cmd->add_option_function<double>(
        "--dt-override", [&](double v) { opts.dt_override = v; }, "Override stepper.dt");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { opts.seed = v; }, "Override the random-data seed");
  };

  CLI::App* run = app.add_subcommand("run", "Execute one configured run");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--resume", opts.resume_path, "Restart from a checkpoint file");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "Execute a parameter sweep");
  sweep->add_option("--config", config_path, "Sweep configuration (JSON)")->required();
  add_common(sweep);

  CLI::App* lemma = app.add_subcommand("lemma-test", "Run the ODE lemma harness");
  lemma->add_option("--count", lemma_count, "Catalog size (default 240)");
  lemma->add_option("--seed", lemma_seed, "Catalog seed");
  lemma->add_option("--out", opts.out_override, "Output directory");

  CLI::App* lv = app.add_subcommand("linear-verify",
                                    "Compare the integrator against linear closed forms");
  add_common(lv);

  CLI::App* report = app.add_subcommand("report", "Recompute verdicts from stored artifacts");
  report->add_option("dir", report_dir, "Run or sweep output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return dampedwave::cmd_run(config_path, opts);
  if (sweep->parsed()) return dampedwave::cmd_sweep(config_path, opts);
  if (lemma->parsed()) return dampedwave::cmd_lemma_test(lemma_count, lemma_seed, opts);
  if (lv->parsed()) return dampedwave::cmd_linear_verify(opts);
  if (report->parsed()) return dampedwave::cmd_report(report_dir);
  return 1;
}
