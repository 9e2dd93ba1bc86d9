// Command-line front end: count, sweep, classify, topk, audit.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "exptract/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::uint64_t node_budget = 0;
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

int run(const std::string& command, const Flags& flags, CLI::Option* seed_opt) {
  using namespace exptract;
  RunConfig cfg;
  if (!flags.config.empty()) {
    cfg = load_config(flags.config);
  } else if (command != "audit") {
    throw Error(ErrorCode::ConfigError, command + " needs --config");
  } else {
    cfg = parse_config(nlohmann::json{{"schema", kConfigSchema}});
  }
  if (!flags.format.empty()) cfg.format = parse_format(flags.format);
  if (!flags.out.empty()) cfg.out_path = flags.out;
  if (flags.node_budget > 0) cfg.node_budget = flags.node_budget;
  if (flags.threads > 0) cfg.threads = flags.threads;
  if (seed_opt->count() > 0) cfg.seed = flags.seed;

  RunOutcome outcome;
  if (command == "count") outcome = run_count(cfg);
  else if (command == "sweep") outcome = run_sweep(cfg);
  else if (command == "classify") outcome = run_classify(cfg);
  else if (command == "topk") outcome = run_topk(cfg);
  else outcome = run_audit(cfg);

  std::ostringstream buf;
  write_outcome(buf, outcome, cfg.format);
  if (cfg.out_path.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + cfg.out_path + "'");
    f << buf.str();
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential tractability toolkit for weighted tensor product problems"};
  app.require_subcommand(1, 1);
  Flags flags;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"count", "information complexity for each (E, d) query"},
           {"sweep", "count over a grid with plot-ready columns"},
           {"classify", "tractability verdicts with evidence"},
           {"topk", "largest tensor-product eigenvalues"},
           {"audit", "oracle and inequality checks"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "run configuration (JSON)");
    sub->add_option("--out", flags.out, "output path (default stdout)");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--node-budget", flags.node_budget, "node budget for exact counting");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", flags.seed, "seed for randomized audit instances");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exptract::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  auto* seed_for_cmd = app.get_subcommands().front()->get_option("--seed");
  try {
    return run(command, flags, seed_for_cmd);
  } catch (const exptract::Error& e) {
    std::fprintf(stderr, "exptract: %s\n", e.what());
    return exptract::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "exptract: %s\n", e.what());
    return exptract::kExitConfig;
  }
}
