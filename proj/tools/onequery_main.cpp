#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "onequery/experiment.hpp"

namespace {

void add_common_options(CLI::App* cmd, onequery::ExperimentConfig& cfg) {
  cmd->add_option("--n", cfg.n, "database / source size");
  cmd->add_option("--A", cfg.alphabet, "digit and answer alphabet size (prime)");
  cmd->add_option("--k", cfg.candidates, "number of candidate database strings");
  cmd->add_option("--l", cfg.slack, "extra codeword digits beyond ceil(log_A k)");
  cmd->add_option("--m", cfg.queries, "number of queries / codeword length");
  cmd->add_option("--seed", cfg.seed, "seed for every randomized step");
  cmd->add_option("--trials", cfg.trials, "number of sampled runs");
  cmd->add_flag("--exhaustive", cfg.exhaustive, "sweep every admissible database instead of sampling");
  cmd->add_option("--dist", cfg.dist, "source probabilities: inline list or a file path");
  cmd->add_option("--cost-mode", cfg.cost_mode, "XOR scheduling for the cost model")
      ->check(CLI::IsMember({"serial", "parallel-xor"}));
  cmd->add_option("--t-preset", cfg.t_preset_name, "database circuit time T(n)")
      ->check(CLI::IsMember({"log", "linear", "quadratic"}));
  cmd->add_option("--output", cfg.output, "report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", cfg.out_path, "write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact simulator and benchmark harness for single-query quantum database search"};
  app.require_subcommand(1);

  onequery::ExperimentConfig cfg;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"coin-weigh", "recover an n-bit database with one superposed spring-scale weighing"},
      {"walsh-search", "find the marked item with one query over the Walsh function group"},
      {"huffman-search", "single-query search with Huffman-coded queries and its error law"},
      {"random-code", "single-query retrieval over Z_A through a random linear code"},
      {"bounds", "information-theoretic query bounds"},
      {"cost", "running-time model for the quantum and classical pipelines"},
  };
  for (const auto& [name, help] : subcommands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common_options(cmd, cfg);
    cmd->callback([&cfg, name = name] { cfg.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const nlohmann::json records = onequery::run_experiment(cfg);
    const std::string text = onequery::render_records(records, cfg.output);
    if (cfg.out_path) {
      std::ofstream out(*cfg.out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot open '" << *cfg.out_path << "' for writing\n";
        return 2;
      }
      out << text;
    } else {
      std::cout << text;
    }
    return onequery::has_invariant_violations(records) ? 4 : 0;
  } catch (const onequery::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
