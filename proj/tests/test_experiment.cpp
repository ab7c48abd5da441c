#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "onequery/experiment.hpp"

using namespace onequery;

namespace {

ExperimentConfig base_config(const std::string& subcommand) {
  ExperimentConfig cfg;
  cfg.subcommand = subcommand;
  return cfg;
}

}  // namespace

TEST(Experiment, CoinWeighExhaustiveReport) {
  ExperimentConfig cfg = base_config("coin-weigh");
  cfg.n = 6;
  cfg.exhaustive = true;
  const nlohmann::json records = run_experiment(cfg);
  ASSERT_EQ(records.size(), 1u);
  const auto& r = records[0];
  EXPECT_EQ(r["observed"]["runs"], 64);
  EXPECT_EQ(r["observed"]["success_rate"], 1.0);
  EXPECT_EQ(r["observed"]["mean_quantum_oracle_calls"], 1.0);
  EXPECT_EQ(r["observed"]["mean_classical_oracle_calls"], 6.0);
  EXPECT_TRUE(r["invariant_violations"].empty());
  EXPECT_FALSE(has_invariant_violations(records));
}

TEST(Experiment, BoundsValues) {
  ExperimentConfig cfg = base_config("bounds");
  cfg.n = 15;
  const nlohmann::json records = run_experiment(cfg);
  const auto& predicted = records[0]["predicted"];
  EXPECT_DOUBLE_EQ(predicted["coin_bound"].get<double>(), 3.75);
  EXPECT_NEAR(predicted["predetermined_limit"].get<double>(), 30.0 / std::log2(15.0), 1e-12);
}

TEST(Experiment, WalshSearchExhaustive) {
  ExperimentConfig cfg = base_config("walsh-search");
  cfg.n = 16;
  cfg.exhaustive = true;
  const nlohmann::json records = run_experiment(cfg);
  const auto& r = records[0];
  EXPECT_EQ(r["observed"]["success_rate"], 1.0);
  EXPECT_EQ(r["observed"]["mean_classical_oracle_calls"], 4.0);
  EXPECT_TRUE(r["invariant_violations"].empty());
}

TEST(Experiment, HuffmanSearchExhaustiveMatchesErrorLaw) {
  ExperimentConfig cfg = base_config("huffman-search");
  cfg.dist = std::string("0.5,0.25,0.25");
  cfg.queries = 1;
  cfg.exhaustive = true;
  const nlohmann::json records = run_experiment(cfg);
  const auto& r = records[0];
  EXPECT_DOUBLE_EQ(r["predicted"]["truncation_error_probability"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(r["observed"]["failure_rate"].get<double>(), 0.5);
  EXPECT_TRUE(r["invariant_violations"].empty());
}

TEST(Experiment, HuffmanDistFromFile) {
  const std::string path = "tmp_dist_for_test.txt";
  {
    std::ofstream out(path);
    out << "0.5 0.25\n0.25\n";
  }
  ExperimentConfig cfg = base_config("huffman-search");
  cfg.dist = path;
  cfg.queries = 2;
  cfg.exhaustive = true;
  const nlohmann::json records = run_experiment(cfg);
  EXPECT_EQ(records[0]["params"]["n"], 3);
  EXPECT_DOUBLE_EQ(records[0]["observed"]["failure_rate"].get<double>(), 0.0);
  std::remove(path.c_str());
}

TEST(Experiment, RandomCodeReportFields) {
  ExperimentConfig cfg = base_config("random-code");
  cfg.alphabet = 3;
  cfg.n = 10;
  cfg.candidates = 9;
  cfg.slack = 2;
  cfg.trials = 400;
  cfg.seed = 11;
  const nlohmann::json records = run_experiment(cfg);
  const auto& r = records[0];
  EXPECT_EQ(r["params"]["m"], 4);
  EXPECT_NEAR(r["predicted"]["collision_probability"].get<double>(),
              1.0 - std::pow(1.0 - 1.0 / 81.0, 8.0), 1e-12);
  EXPECT_TRUE(r["invariant_violations"].empty());
  EXPECT_EQ(r["observed"]["runs"], 400);
}

TEST(Experiment, CostRecordsPerAlgorithm) {
  ExperimentConfig cfg = base_config("cost");
  cfg.n = 8;
  cfg.queries = 3;
  cfg.t_preset_name = "quadratic";
  const nlohmann::json records = run_experiment(cfg);
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0]["cost_report"]["algorithm"], "coin_weighing");
  EXPECT_EQ(records[0]["cost_report"]["crossover_n"], 3);
  EXPECT_DOUBLE_EQ(records[0]["cost_report"]["quantum_time"].get<double>(), 66.0);
  EXPECT_EQ(records[1]["cost_report"]["algorithm"], "walsh_search");
  EXPECT_DOUBLE_EQ(records[1]["cost_report"]["quantum_time"].get<double>(), 2.0 + 24.0 + 64.0);
}

TEST(Experiment, DeterministicReports) {
  ExperimentConfig cfg = base_config("random-code");
  cfg.alphabet = 2;
  cfg.n = 12;
  cfg.candidates = 8;
  cfg.slack = 1;
  cfg.trials = 200;
  cfg.seed = 9;
  const std::string a = render_records(run_experiment(cfg), "json");
  const std::string b = render_records(run_experiment(cfg), "json");
  EXPECT_EQ(a, b);
  const std::string csv_a = render_records(run_experiment(cfg), "csv");
  const std::string csv_b = render_records(run_experiment(cfg), "csv");
  EXPECT_EQ(csv_a, csv_b);
}

TEST(Experiment, CsvShape) {
  ExperimentConfig cfg = base_config("bounds");
  cfg.n = 8;
  const std::string csv = render_records(run_experiment(cfg), "csv");
  // header plus one row
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_NE(csv.find("predicted.coin_bound"), std::string::npos);
}

TEST(Experiment, UsageValidation) {
  EXPECT_THROW(run_experiment(base_config("coin-weigh")), std::invalid_argument);
  {
    ExperimentConfig cfg = base_config("coin-weigh");
    cfg.n = 4;
    cfg.trials = 10;  // sampling without a seed
    EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  }
  {
    ExperimentConfig cfg = base_config("walsh-search");
    cfg.n = 6;  // not a power of two
    cfg.exhaustive = true;
    EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  }
  {
    ExperimentConfig cfg = base_config("random-code");
    cfg.alphabet = 4;  // composite
    cfg.n = 8;
    cfg.candidates = 4;
    cfg.slack = 1;
    cfg.trials = 10;
    cfg.seed = 1;
    EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  }
  {
    ExperimentConfig cfg = base_config("cost");
    cfg.n = 8;
    cfg.t_preset_name = "cubic";
    EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  }
  EXPECT_THROW(run_experiment(base_config("unknown")), std::invalid_argument);
}

TEST(Experiment, InlineDistValidation) {
  ExperimentConfig cfg = base_config("huffman-search");
  cfg.dist = std::string("0.5,0.6");  // does not sum to 1
  cfg.queries = 1;
  cfg.exhaustive = true;
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}
