// gorma: run retransmission experiments from a scenario config.
//
//   gorma sweep    --config configs/one_hop_copies.ini
//   gorma analytic --config configs/one_hop_copies.ini --out analytic.csv
//   gorma simulate --config configs/single_point.ini --periods 20000
//   gorma optimize --config configs/two_group_optimize.ini
//   gorma capacity --config configs/capacity.ini
//
// Exit status: 0 ran (also when the optimization is infeasible), 2 config or
// usage error, 3 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gorma/config.hpp"
#include "gorma/csv.hpp"
#include "gorma/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string config;
  std::optional<std::int64_t> seed;
  std::optional<std::int64_t> periods;
  std::optional<std::string> out;
  bool quiet = false;
};

std::optional<unsigned> threads_from_env() {
  const char* raw = std::getenv("GORMA_THREADS");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0) throw gorma::ConfigError("GORMA_THREADS", 0, "GORMA_THREADS", "expected a non-negative integer");
  return static_cast<unsigned>(v);
}

gorma::ScenarioConfig prepare(const Flags& flags) {
  gorma::ScenarioConfig config = gorma::load_config(flags.config);
  if (flags.seed) {
    if (*flags.seed < 0) throw gorma::ConfigError("--seed", 0, "seed", "must be >= 0");
    config.seed = static_cast<std::uint64_t>(*flags.seed);
  }
  if (flags.periods) {
    if (*flags.periods < 1) throw gorma::ConfigError("--periods", 0, "periods", "must be >= 1");
    config.periods = *flags.periods;
  }
  if (flags.out) config.output_path = *flags.out;
  if (auto t = threads_from_env()) config.threads = *t;
  return config;
}

int run(const std::string& command, const Flags& flags) {
  gorma::ScenarioConfig config = prepare(flags);

  gorma::ProgressFn progress;
  if (!flags.quiet) {
    progress = [&](std::size_t i, std::size_t n) {
      std::cerr << "[gorma] " << command << " point " << (i + 1) << "/" << n << "\n";
    };
  }

  gorma::ScenarioOutcome outcome;
  if (command == "simulate") {
    config.simulate = true;
    outcome = gorma::run_single_point(config);
  } else {
    if (command == "analytic") config.simulate = false;
    if (command == "optimize") config.mode = gorma::Mode::Optimize;
    if (command == "capacity") config.mode = gorma::Mode::Capacity;
    outcome = gorma::run_scenario(config, progress);
  }

  gorma::emit_csv(outcome.table, config.output_path);
  std::cout << outcome.summary.dump() << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GORMA retransmission analysis, optimization and simulation"};
  app.require_subcommand(1);

  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"analytic", "Evaluate the closed-form model over the config's sweep"},
      {"simulate", "Simulate the configured point and compare with the model"},
      {"optimize", "Optimal retransmission counts over the config's sweep"},
      {"capacity", "Largest first group meeting its requirement, per q_1"},
      {"sweep", "Run the experiment named by the config's mode"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "Scenario config file")->required();
    sub->add_option("--seed", flags.seed, "RNG seed (overrides config)");
    sub->add_option("--periods", flags.periods, "Simulated periods (overrides config)");
    sub->add_option("--out", flags.out, "CSV output path (overrides config)");
    sub->add_flag("--quiet", flags.quiet, "Suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const gorma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gorma::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  }
}
