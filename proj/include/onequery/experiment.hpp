#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "onequery/algorithms.hpp"
#include "onequery/baselines.hpp"
#include "onequery/costmodel.hpp"

namespace onequery {

/// One CLI invocation's parameters. Field names follow the flags.
struct ExperimentConfig {
  std::string subcommand;
  std::optional<std::size_t> n;
  std::optional<std::uint32_t> alphabet;   // --A
  std::optional<std::size_t> candidates;   // --k
  std::optional<std::size_t> slack;        // --l
  std::optional<std::size_t> queries;      // --m
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool exhaustive = false;
  std::optional<std::string> dist;         // inline probability list or a file path
  std::string cost_mode = "serial";        // serial | parallel-xor
  std::string t_preset_name = "log";       // log | linear | quadratic
  std::string output = "json";             // json | csv
  std::optional<std::string> out_path;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline XorMode parse_mode(const std::string& mode) {
  if (mode == "serial") return XorMode::serial_xor;
  if (mode == "parallel-xor") return XorMode::parallel_xor;
  throw std::invalid_argument("cost-mode must be serial or parallel-xor");
}

inline std::optional<std::vector<double>> try_parse_inline_reals(const std::string& text) {
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof() || values.empty()) return std::nullopt;
  return values;
}

/// --dist accepts an inline comma/space separated list, otherwise a file of
/// whitespace-separated reals. Sums are checked to 1e-6 and renormalized.
inline SourceDistribution load_distribution(const std::string& spec_text) {
  std::vector<double> p;
  if (auto inline_values = try_parse_inline_reals(spec_text)) {
    p = std::move(*inline_values);
  } else {
    std::ifstream file(spec_text);
    require(static_cast<bool>(file), "dist: cannot open file '" + spec_text + "'");
    double v = 0.0;
    while (file >> v) p.push_back(v);
    require(file.eof() && !p.empty(), "dist: file must hold whitespace-separated reals");
  }
  long double total = 0.0L;
  for (double x : p) {
    require(x >= 0.0, "dist: probabilities must be nonnegative");
    total += x;
  }
  require(std::abs(static_cast<double>(total - 1.0L)) <= 1e-6,
          "dist: probabilities must sum to 1 within 1e-6");
  for (double& x : p) x = static_cast<double>(static_cast<long double>(x) / total);
  return SourceDistribution(std::move(p));
}

inline std::vector<double> cumulative(const SourceDistribution& source) {
  std::vector<double> cum(source.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < source.size(); ++i) {
    acc += source[i];
    cum[i] = static_cast<double>(acc);
  }
  cum.back() = 1.0;
  return cum;
}

inline std::size_t sample_index(const std::vector<double>& cum, double r) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), r);
  return std::min<std::size_t>(cum.size() - 1, static_cast<std::size_t>(it - cum.begin()));
}

struct RunStats {
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t ambiguous = 0;
  std::uint64_t total_calls = 0;
  double min_probability = 1.0;
  bool all_single_call = true;

  void add(const Transcript& t) {
    ++runs;
    successes += t.success ? 1 : 0;
    ambiguous += t.recovered ? 0 : 1;
    total_calls += t.oracle_calls;
    min_probability = std::min(min_probability, t.final_outcome_probability);
    all_single_call = all_single_call && (t.oracle_calls == 1);
  }

  double success_rate() const { return static_cast<double>(successes) / static_cast<double>(runs); }
  double mean_calls() const { return static_cast<double>(total_calls) / static_cast<double>(runs); }

  nlohmann::json to_json() const {
    return {{"runs", runs},
            {"successes", successes},
            {"failures", runs - successes},
            {"ambiguous", ambiguous},
            {"mean_oracle_calls", mean_calls()},
            {"min_outcome_probability", min_probability}};
  }
};

inline void note_violation(std::vector<std::string>& violations, const std::string& what) {
  if (violations.size() < 8) violations.push_back(what);
}

inline nlohmann::json cost_to_json(const CostReport& report, const std::string& preset,
                                   std::optional<std::size_t> crossover) {
  nlohmann::json j{{"algorithm", report.algorithm},
                   {"mode", std::string(xor_mode_name(report.mode))},
                   {"t_preset", preset},
                   {"quantum_time", report.quantum_time},
                   {"classical_time", report.classical_time},
                   {"bound_queries", report.bound_queries}};
  if (report.parallel_extrapolated) j["parallel_extrapolated"] = true;
  if (crossover) j["crossover_n"] = *crossover;
  return j;
}

inline nlohmann::json coin_weigh_record(const ExperimentConfig& cfg) {
  require(cfg.n.has_value(), "coin-weigh: --n is required");
  const std::size_t n = *cfg.n;
  require(n >= 1 && n <= 20, "coin-weigh: n must be in 1..20");
  require(cfg.exhaustive || cfg.trials.has_value(), "coin-weigh: choose --exhaustive or --trials");
  if (!cfg.exhaustive) {
    require(*cfg.trials >= 1, "coin-weigh: trials must be >= 1");
    require(cfg.seed.has_value(), "coin-weigh: --seed is required with --trials");
  }

  std::vector<std::uint64_t> databases;
  if (cfg.exhaustive) {
    const std::uint64_t count = std::uint64_t(1) << n;
    databases.reserve(count);
    for (std::uint64_t v = 0; v < count; ++v) databases.push_back(v);
  } else {
    std::mt19937_64 gen(*cfg.seed);
    databases.reserve(*cfg.trials);
    for (std::size_t t = 0; t < *cfg.trials; ++t)
      databases.push_back(rng::uniform_below(gen, std::uint64_t(1) << n));
  }

  RunStats quantum, classical;
  std::vector<std::string> violations;
  for (std::uint64_t value : databases) {
    const DigitString y = DigitString::from_index(value, n, 2);
    const OracleSpec spec = OracleSpec::spring_scale(y);
    const Transcript q = run_bv_coin_weighing(spec);
    const Transcript c = classical_parity_readout(spec);
    quantum.add(q);
    classical.add(c);
    if (!q.success) note_violation(violations, "quantum recovery failed on y=" + y.str());
    if (!c.success) note_violation(violations, "classical readout failed on y=" + y.str());
  }
  if (!quantum.all_single_call)
    note_violation(violations, "a quantum run used more than one oracle call");

  nlohmann::json params{{"n", n}, {"exhaustive", cfg.exhaustive}};
  if (cfg.trials) params["trials"] = *cfg.trials;
  if (cfg.seed) params["seed"] = *cfg.seed;

  nlohmann::json predicted{{"success_rate", 1.0},
                           {"quantum_oracle_calls", 1},
                           {"classical_oracle_calls", n},
                           {"entropy_bits", static_cast<double>(n)},
                           {"coin_bound", coin_bound(n)}};
  if (n >= 2) predicted["predetermined_limit"] = predetermined_limit(n);

  nlohmann::json observed{{"runs", quantum.runs},
                          {"success_rate", quantum.success_rate()},
                          {"min_outcome_probability", quantum.min_probability},
                          {"mean_quantum_oracle_calls", quantum.mean_calls()},
                          {"classical_success_rate", classical.success_rate()},
                          {"mean_classical_oracle_calls", classical.mean_calls()}};

  const XorMode mode = parse_mode(cfg.cost_mode);
  const TimeFunction T = t_preset(cfg.t_preset_name);
  const CostReport cost = runtime(CostAlgorithm::coin_weighing, n, std::nullopt, T, mode);
  const auto crossover =
      crossover_n(CostAlgorithm::coin_weighing, std::nullopt, T, mode, std::size_t(1) << 20);

  return {{"algorithm", "coin-weigh"},
          {"params", params},
          {"predicted", predicted},
          {"observed", observed},
          {"transcripts_summary", quantum.to_json()},
          {"cost_report", cost_to_json(cost, cfg.t_preset_name, crossover)},
          {"invariant_violations", violations}};
}

inline nlohmann::json walsh_search_record(const ExperimentConfig& cfg) {
  require(cfg.n.has_value(), "walsh-search: --n is required");
  const std::size_t n = *cfg.n;
  require(n >= 2 && std::has_single_bit(n), "walsh-search: n must be a power of two >= 2");
  require(n <= simulator_dimension_cap, "walsh-search: n exceeds the simulator cap");
  require(cfg.exhaustive || cfg.trials.has_value(), "walsh-search: choose --exhaustive or --trials");
  if (!cfg.exhaustive) {
    require(*cfg.trials >= 1, "walsh-search: trials must be >= 1");
    require(cfg.seed.has_value(), "walsh-search: --seed is required with --trials");
  }

  std::vector<std::size_t> items;
  if (cfg.exhaustive) {
    items.resize(n);
    for (std::size_t i = 0; i < n; ++i) items[i] = i;
  } else {
    std::mt19937_64 gen(*cfg.seed);
    items.reserve(*cfg.trials);
    for (std::size_t t = 0; t < *cfg.trials; ++t)
      items.push_back(static_cast<std::size_t>(rng::uniform_below(gen, n)));
  }

  const double log2n = std::log2(static_cast<double>(n));
  RunStats quantum, classical;
  std::vector<std::string> violations;
  for (std::size_t item : items) {
    const OracleSpec spec = OracleSpec::parity(DigitString::unit(n, item, 2));
    const Transcript q = run_walsh_search(spec);
    const Transcript c = classical_bisection(spec);
    quantum.add(q);
    classical.add(c);
    if (!q.success) note_violation(violations, "quantum walsh search missed item " + std::to_string(item));
    if (!c.success) note_violation(violations, "classical bisection missed item " + std::to_string(item));
    if (c.oracle_calls != static_cast<std::uint64_t>(log2n + 0.5))
      note_violation(violations, "bisection used an unexpected query count");
  }
  if (!quantum.all_single_call)
    note_violation(violations, "a quantum run used more than one oracle call");

  nlohmann::json params{{"n", n}, {"exhaustive", cfg.exhaustive}};
  if (cfg.trials) params["trials"] = *cfg.trials;
  if (cfg.seed) params["seed"] = *cfg.seed;

  nlohmann::json predicted{{"success_rate", 1.0},
                           {"quantum_oracle_calls", 1},
                           {"classical_oracle_calls", log2n},
                           {"entropy_bits", log2n},
                           {"info_bound_queries", info_bound(log2n, 2)}};

  nlohmann::json observed{{"runs", quantum.runs},
                          {"success_rate", quantum.success_rate()},
                          {"min_outcome_probability", quantum.min_probability},
                          {"mean_quantum_oracle_calls", quantum.mean_calls()},
                          {"classical_success_rate", classical.success_rate()},
                          {"mean_classical_oracle_calls", classical.mean_calls()}};

  const XorMode mode = parse_mode(cfg.cost_mode);
  const TimeFunction T = t_preset(cfg.t_preset_name);
  const CostReport cost = runtime(CostAlgorithm::walsh_search, n, std::nullopt, T, mode);
  const auto crossover =
      crossover_n(CostAlgorithm::walsh_search, std::nullopt, T, mode, std::size_t(1) << 20);

  return {{"algorithm", "walsh-search"},
          {"params", params},
          {"predicted", predicted},
          {"observed", observed},
          {"transcripts_summary", quantum.to_json()},
          {"cost_report", cost_to_json(cost, cfg.t_preset_name, crossover)},
          {"invariant_violations", violations}};
}

inline nlohmann::json huffman_search_record(const ExperimentConfig& cfg) {
  require(cfg.dist.has_value() || cfg.n.has_value(),
          "huffman-search: provide --dist or --n for a uniform source");
  const SourceDistribution source =
      cfg.dist ? load_distribution(*cfg.dist) : SourceDistribution::uniform(*cfg.n);
  const std::size_t n = source.size();
  require(n >= 2, "huffman-search: the source needs at least two items");
  require(cfg.queries.has_value(), "huffman-search: --m is required");
  const std::size_t m = *cfg.queries;
  require(cfg.exhaustive || cfg.trials.has_value(), "huffman-search: choose --exhaustive or --trials");
  if (!cfg.exhaustive) {
    require(*cfg.trials >= 1, "huffman-search: trials must be >= 1");
    require(cfg.seed.has_value(), "huffman-search: --seed is required with --trials");
  }

  const HuffmanCode code = build_huffman(source);
  const double predicted_error = truncation_error_probability(code, m);
  const double mean_length = code.mean_length();

  // per-item outcomes are deterministic, so run each marked item once
  std::vector<Transcript> quantum_by_item(n);
  std::vector<Transcript> classical_by_item(n);
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < n; ++i) {
    const OracleSpec spec = OracleSpec::parity(DigitString::unit(n, i, 2));
    quantum_by_item[i] = run_huffman_search(source, m, spec);
    classical_by_item[i] = classical_huffman_search(spec, code);
    if (quantum_by_item[i].oracle_calls != 1)
      note_violation(violations, "a quantum run used more than one oracle call");
    if (!classical_by_item[i].success)
      note_violation(violations, "classical huffman search missed item " + std::to_string(i));
  }

  RunStats quantum, classical;
  long double weighted_error = 0.0L;
  long double weighted_calls = 0.0L;
  if (cfg.exhaustive) {
    for (std::size_t i = 0; i < n; ++i) {
      quantum.add(quantum_by_item[i]);
      classical.add(classical_by_item[i]);
      if (!quantum_by_item[i].success) weighted_error += source[i];
      weighted_calls += static_cast<long double>(source[i]) * classical_by_item[i].oracle_calls;
    }
  } else {
    const std::vector<double> cum = cumulative(source);
    std::mt19937_64 gen(*cfg.seed);
    for (std::size_t t = 0; t < *cfg.trials; ++t) {
      const std::size_t item = sample_index(cum, rng::canonical(gen));
      quantum.add(quantum_by_item[item]);
      classical.add(classical_by_item[item]);
      if (!quantum_by_item[item].success) weighted_error += 1;
      weighted_calls += classical_by_item[item].oracle_calls;
    }
    weighted_error /= static_cast<long double>(*cfg.trials);
    weighted_calls /= static_cast<long double>(*cfg.trials);
  }

  const double observed_error = static_cast<double>(weighted_error);
  const double observed_calls = static_cast<double>(weighted_calls);
  const double sigma =
      cfg.exhaustive ? 0.0
                     : std::sqrt(std::max(0.0, predicted_error * (1.0 - predicted_error) /
                                                   static_cast<double>(*cfg.trials)));

  nlohmann::json code_table = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i)
    code_table.push_back({{"item", i}, {"probability", source[i]}, {"codeword", code.codewords()[i].str()}});

  nlohmann::json params{{"n", n}, {"m", m}, {"exhaustive", cfg.exhaustive}};
  if (cfg.trials) params["trials"] = *cfg.trials;
  if (cfg.seed) params["seed"] = *cfg.seed;

  nlohmann::json predicted{{"entropy_bits", source.entropy_bits()},
                           {"mean_code_length", mean_length},
                           {"max_code_length", code.max_length()},
                           {"truncation_error_probability", predicted_error},
                           {"classical_expected_calls", mean_length},
                           {"quantum_oracle_calls", 1}};

  nlohmann::json observed{{"runs", quantum.runs},
                          {"failure_rate", observed_error},
                          {"binomial_sigma", sigma},
                          {"within_3_sigma", std::abs(observed_error - predicted_error) <= 3.0 * sigma + 1e-12},
                          {"mean_classical_oracle_calls", observed_calls},
                          {"min_outcome_probability", quantum.min_probability}};

  const XorMode mode = parse_mode(cfg.cost_mode);
  const TimeFunction T = t_preset(cfg.t_preset_name);
  const CostReport cost = runtime(CostAlgorithm::huffman_search, n, m, T, mode,
                                  source.entropy_bits(), 2);
  const auto crossover =
      crossover_n(CostAlgorithm::huffman_search, m, T, mode, std::size_t(1) << 20);

  return {{"algorithm", "huffman-search"},
          {"params", params},
          {"predicted", predicted},
          {"observed", observed},
          {"code_table", code_table},
          {"transcripts_summary", quantum.to_json()},
          {"cost_report", cost_to_json(cost, cfg.t_preset_name, crossover)},
          {"invariant_violations", violations}};
}

inline std::vector<DigitString> draw_distinct_candidates(std::mt19937_64& gen, std::size_t k,
                                                         std::size_t n, std::uint32_t alphabet) {
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<DigitString> out;
  out.reserve(k);
  while (out.size() < k) {
    std::vector<std::uint32_t> digits(n);
    for (auto& d : digits) d = rng::uniform_digit(gen, alphabet);
    if (seen.insert(digits).second) out.emplace_back(std::move(digits), alphabet);
  }
  return out;
}

inline nlohmann::json random_code_record(const ExperimentConfig& cfg) {
  require(cfg.alphabet.has_value(), "random-code: --A is required");
  require(cfg.n.has_value(), "random-code: --n is required");
  require(cfg.candidates.has_value(), "random-code: --k is required");
  require(cfg.slack.has_value(), "random-code: --l is required");
  require(cfg.trials.has_value() && *cfg.trials >= 1, "random-code: --trials is required");
  require(cfg.seed.has_value(), "random-code: --seed is required");
  const std::uint32_t a = *cfg.alphabet;
  require(is_prime(a), "random-code: A must be prime");
  const std::size_t n = *cfg.n;
  const std::size_t k = *cfg.candidates;
  const std::size_t l = *cfg.slack;
  require(k >= 1 && k <= (std::size_t(1) << 20), "random-code: k must be in 1..2^20");
  {
    // distinct candidates must exist
    long double capacity = 1.0L;
    for (std::size_t i = 0; i < n && capacity < 1e18L; ++i) capacity *= a;
    require(static_cast<long double>(k) <= capacity, "random-code: k exceeds A^n distinct strings");
  }
  const std::size_t m = random_code_length(a, k, l);
  require(m <= n, "random-code: code length m = ceil(log_A k) + l exceeds n");

  const double p_col = collision_probability(a, m, k);
  const double p_col_approx = collision_probability_approx(k, l);

  RunStats quantum, classical;
  std::vector<std::string> violations;
  for (std::size_t t = 0; t < *cfg.trials; ++t) {
    std::mt19937_64 gen(rng::derive_seed(*cfg.seed, t, 0));
    const std::vector<DigitString> pool = draw_distinct_candidates(gen, k, n, a);
    const std::size_t marked = static_cast<std::size_t>(rng::uniform_below(gen, k));
    const std::uint64_t generator_seed = rng::derive_seed(*cfg.seed, t, 1);
    const OracleSpec spec = OracleSpec::za_dot(pool[marked]);
    const Transcript q = run_random_coding(pool, l, generator_seed, spec);
    const Transcript c =
        classical_random_code(spec, random_generators(n, m, a, generator_seed), pool);
    quantum.add(q);
    classical.add(c);
    if (q.success != c.success || q.recovered_item != c.recovered_item)
      note_violation(violations, "quantum and classical decodes disagreed on trial " + std::to_string(t));
    if (q.oracle_calls != 1) note_violation(violations, "a quantum run used more than one oracle call");
    if (c.oracle_calls != m) note_violation(violations, "classical run used an unexpected query count");
  }

  const double failure_rate = 1.0 - quantum.success_rate();
  const double sigma =
      std::sqrt(std::max(0.0, p_col * (1.0 - p_col) / static_cast<double>(*cfg.trials)));

  nlohmann::json params{{"A", a}, {"n", n}, {"k", k},
                        {"l", l}, {"m", m}, {"trials", *cfg.trials}, {"seed", *cfg.seed}};
  nlohmann::json predicted{{"collision_probability", p_col},
                           {"collision_probability_small_l_approx", p_col_approx},
                           {"success_rate", 1.0 - p_col},
                           {"entropy_bits", std::log2(static_cast<double>(k))},
                           {"classical_oracle_calls", m},
                           {"quantum_oracle_calls", 1}};
  nlohmann::json observed{{"runs", quantum.runs},
                          {"failure_rate", failure_rate},
                          {"binomial_sigma", sigma},
                          {"within_3_sigma", std::abs(failure_rate - p_col) <= 3.0 * sigma + 1e-12},
                          {"mean_quantum_oracle_calls", quantum.mean_calls()},
                          {"mean_classical_oracle_calls", classical.mean_calls()},
                          {"min_outcome_probability", quantum.min_probability}};

  const XorMode mode = parse_mode(cfg.cost_mode);
  const TimeFunction T = t_preset(cfg.t_preset_name);
  const CostReport cost = runtime(CostAlgorithm::random_coding, n, m, T, mode,
                                  std::log2(static_cast<double>(k)), a);
  const auto crossover =
      crossover_n(CostAlgorithm::random_coding, m, T, mode, std::size_t(1) << 20);

  return {{"algorithm", "random-code"},
          {"params", params},
          {"predicted", predicted},
          {"observed", observed},
          {"transcripts_summary", quantum.to_json()},
          {"cost_report", cost_to_json(cost, cfg.t_preset_name, crossover)},
          {"invariant_violations", violations}};
}

inline nlohmann::json bounds_record(const ExperimentConfig& cfg) {
  require(cfg.n.has_value(), "bounds: --n is required");
  const std::size_t n = *cfg.n;
  require(n >= 1, "bounds: n must be >= 1");
  nlohmann::json predicted{{"coin_bound", coin_bound(n)},
                           {"spring_scale_entropy_bits", static_cast<double>(n)},
                           {"spring_scale_answers", n + 1}};
  if (n >= 2) {
    predicted["predetermined_limit"] = predetermined_limit(n);
    if (std::has_single_bit(n)) predicted["bisection_queries"] = std::log2(static_cast<double>(n));
  }
  return {{"algorithm", "bounds"},
          {"params", {{"n", n}}},
          {"predicted", predicted},
          {"invariant_violations", nlohmann::json::array()}};
}

inline std::vector<nlohmann::json> cost_records(const ExperimentConfig& cfg) {
  require(cfg.n.has_value(), "cost: --n is required");
  const std::size_t n = *cfg.n;
  const XorMode mode = parse_mode(cfg.cost_mode);
  const TimeFunction T = t_preset(cfg.t_preset_name);

  std::vector<std::pair<CostAlgorithm, bool>> targets = {
      {CostAlgorithm::coin_weighing, true},
      {CostAlgorithm::walsh_search, n >= 2},
      {CostAlgorithm::huffman_search, cfg.queries.has_value()},
      {CostAlgorithm::random_coding, cfg.queries.has_value()},
  };

  std::vector<nlohmann::json> records;
  for (const auto& [algorithm, enabled] : targets) {
    if (!enabled) continue;
    const std::optional<std::size_t> m =
        (algorithm == CostAlgorithm::huffman_search || algorithm == CostAlgorithm::random_coding)
            ? cfg.queries
            : std::nullopt;
    const CostReport report = runtime(algorithm, n, m, T, mode);
    const auto crossover = crossover_n(algorithm, m, T, mode, std::size_t(1) << 20);
    nlohmann::json params{{"n", n},
                          {"target", std::string(cost_algorithm_name(algorithm))},
                          {"t_preset", cfg.t_preset_name},
                          {"cost_mode", cfg.cost_mode}};
    if (m) params["m"] = *m;
    records.push_back({{"algorithm", "cost"},
                       {"params", params},
                       {"cost_report", cost_to_json(report, cfg.t_preset_name, crossover)},
                       {"invariant_violations", nlohmann::json::array()}});
  }
  return records;
}

inline void flatten_json(const nlohmann::json& value, const std::string& prefix,
                         std::map<std::string, std::string>& row) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items())
      flatten_json(child, prefix.empty() ? key : prefix + "." + key, row);
  } else if (value.is_string()) {
    row[prefix] = value.get<std::string>();
  } else {
    row[prefix] = value.dump();
  }
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

/// Executes one configured experiment and returns an array of report records.
inline nlohmann::json run_experiment(const ExperimentConfig& cfg) {
  nlohmann::json records = nlohmann::json::array();
  if (cfg.subcommand == "coin-weigh") {
    records.push_back(detail::coin_weigh_record(cfg));
  } else if (cfg.subcommand == "walsh-search") {
    records.push_back(detail::walsh_search_record(cfg));
  } else if (cfg.subcommand == "huffman-search") {
    records.push_back(detail::huffman_search_record(cfg));
  } else if (cfg.subcommand == "random-code") {
    records.push_back(detail::random_code_record(cfg));
  } else if (cfg.subcommand == "bounds") {
    records.push_back(detail::bounds_record(cfg));
  } else if (cfg.subcommand == "cost") {
    for (auto& record : detail::cost_records(cfg)) records.push_back(std::move(record));
  } else {
    throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");
  }
  return records;
}

inline std::string render_records(const nlohmann::json& records, const std::string& format) {
  if (format == "json") return records.dump(2) + "\n";
  if (format == "csv") {
    std::vector<std::map<std::string, std::string>> rows;
    std::set<std::string> keys;
    for (const auto& record : records) {
      std::map<std::string, std::string> row;
      detail::flatten_json(record, "", row);
      for (const auto& [key, value] : row) keys.insert(key);
      rows.push_back(std::move(row));
    }
    std::string out;
    bool first = true;
    for (const auto& key : keys) {
      if (!first) out.push_back(',');
      out += detail::csv_escape(key);
      first = false;
    }
    out.push_back('\n');
    for (const auto& row : rows) {
      first = true;
      for (const auto& key : keys) {
        if (!first) out.push_back(',');
        const auto it = row.find(key);
        if (it != row.end()) out += detail::csv_escape(it->second);
        first = false;
      }
      out.push_back('\n');
    }
    return out;
  }
  throw std::invalid_argument("output must be json or csv");
}

inline bool has_invariant_violations(const nlohmann::json& records) {
  for (const auto& record : records)
    if (record.contains("invariant_violations") && !record["invariant_violations"].empty())
      return true;
  return false;
}

}  // namespace onequery
