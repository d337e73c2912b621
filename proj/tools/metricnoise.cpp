#include <CLI11.hpp>

#include "metricnoise/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = metricnoise::cli;
  CLI::App app{"Serial independence tests for object-valued time series"};
  app.require_subcommand(1);

  cli::CommonArgs args;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string dump_process;
  std::string representation = "quantile";

  auto add_common = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("--input", args.input, "CSV file of observations")->required();
    sub->add_option("--config", args.config, "JSON configuration")->required();
    sub->add_option("--out", args.out, "Output path");
    sub->add_option("--seed", seed, "Seed (overrides the config)");
    sub->add_option("--threads", threads,
                    "Worker threads (default: METRICNOISE_THREADS, then all cores)");
  };

  CLI::App* test = app.add_subcommand("test", "Run the CvM or KS test on one series");
  add_common(test, true);
  test->add_option("--dump-process", dump_process, "Write (zeta, S_n(zeta)) as CSV");

  CLI::App* adcv = app.add_subcommand("adcv", "Write V_n(k) for k = 1..K_max as CSV");
  add_common(adcv, true);

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a series in the input format");
  add_common(simulate, false);
  simulate->add_option("--representation", representation,
                       "Distribution columns: quantile, cdf or density");

  CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  add_common(experiment, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitError;
  }

  for (CLI::App* sub : {test, adcv, simulate, experiment}) {
    if (sub->count("--seed")) args.seed = seed;
    if (sub->count("--threads")) args.threads = threads;
  }

  if (*test) return cli::cmd_test(args, dump_process);
  if (*adcv) return cli::cmd_adcv(args);
  if (*simulate) return cli::cmd_simulate(args, representation);
  return cli::cmd_experiment(args);
}
