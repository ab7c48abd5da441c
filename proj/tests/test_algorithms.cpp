#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "onequery/algorithms.hpp"
#include "onequery/baselines.hpp"

using namespace onequery;

TEST(CoinWeighing, ZeroDatabase) {
  const Transcript t = run_bv_coin_weighing(OracleSpec::spring_scale(DigitString::zeros(5, 2)));
  EXPECT_TRUE(t.success);
  EXPECT_EQ(t.recovered->str(), "00000");
  EXPECT_EQ(t.oracle_calls, 1u);
}

TEST(CoinWeighing, TwoCoinExample) {
  const Transcript t =
      run_bv_coin_weighing(OracleSpec::spring_scale(DigitString::parse("10", 2)));
  EXPECT_TRUE(t.success);
  EXPECT_EQ(t.recovered->str(), "10");
  EXPECT_GE(t.final_outcome_probability, 1.0 - 1e-9);
}

TEST(CoinWeighing, ExhaustiveSmall) {
  const std::size_t n = 6;
  for (std::uint64_t v = 0; v < (1u << n); ++v) {
    const DigitString y = DigitString::from_index(v, n, 2);
    const Transcript t = run_bv_coin_weighing(OracleSpec::spring_scale(y));
    ASSERT_TRUE(t.success) << "failed on y=" << y.str();
    EXPECT_EQ(*t.recovered, y);
    EXPECT_EQ(t.oracle_calls, 1u);
    EXPECT_GE(t.final_outcome_probability, 1.0 - 1e-9);
  }
}

TEST(CoinWeighing, UsesOnlyParityInformation) {
  // a parity oracle of alphabet 2 recovers the same databases
  for (std::uint64_t v = 0; v < 32; ++v) {
    const DigitString y = DigitString::from_index(v, 5, 2);
    const Transcript spring = run_bv_coin_weighing(OracleSpec::spring_scale(y));
    const Transcript parity = run_bv_coin_weighing(OracleSpec::parity(y));
    EXPECT_EQ(*spring.recovered, *parity.recovered);
    EXPECT_EQ(spring.success, parity.success);
  }
}

TEST(CoinWeighing, AnswerRegisterUntouched) {
  for (std::uint64_t v : {0u, 3u, 9u, 15u}) {
    const PipelineTrace trace =
        run_bv_coin_weighing_traced(OracleSpec::spring_scale(DigitString::from_index(v, 4, 2)));
    EXPECT_GE(trace.answer_register_fidelity, 1.0 - 1e-12);
    EXPECT_TRUE(trace.transcript.success);
  }
}

TEST(CoinWeighing, ResourceCap) {
  EXPECT_THROW(run_bv_coin_weighing(OracleSpec::spring_scale(DigitString::zeros(21, 2))),
               resource_error);
  EXPECT_THROW(run_bv_coin_weighing(OracleSpec::za_dot(DigitString::zeros(4, 2))),
               std::invalid_argument);
}

TEST(WalshSearch, SmallestInstance) {
  for (std::size_t i = 0; i < 2; ++i) {
    const Transcript t = run_walsh_search(OracleSpec::parity(DigitString::unit(2, i, 2)));
    EXPECT_TRUE(t.success);
    EXPECT_EQ(*t.recovered_item, i);
    EXPECT_GE(t.final_outcome_probability, 1.0 - 1e-9);
  }
}

TEST(WalshSearch, ExhaustiveEight) {
  for (std::size_t i = 0; i < 8; ++i) {
    const Transcript t = run_walsh_search(OracleSpec::parity(DigitString::unit(8, i, 2)));
    EXPECT_TRUE(t.success);
    EXPECT_EQ(t.oracle_calls, 1u);
  }
}

TEST(WalshSearch, PostQueryStatesOrthogonal) {
  std::vector<QuantumState> states;
  for (std::size_t i = 0; i < 8; ++i) {
    PipelineTrace trace = run_walsh_search_traced(OracleSpec::parity(DigitString::unit(8, i, 2)));
    EXPECT_GE(trace.answer_register_fidelity, 1.0 - 1e-12);
    states.push_back(std::move(*trace.queried));
  }
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      EXPECT_LE(std::abs(inner_product(states[i], states[j])), 1e-12);
}

TEST(WalshSearch, PreconditionErrors) {
  EXPECT_THROW(run_walsh_search(OracleSpec::parity(DigitString::parse("1100", 2))),
               std::invalid_argument);
  EXPECT_THROW(run_walsh_search(OracleSpec::parity(DigitString::unit(6, 0, 2))),
               std::domain_error);
}

TEST(HuffmanSearch, EquiprobableMatchesWalsh) {
  const SourceDistribution source = SourceDistribution::uniform(8);
  for (std::size_t i = 0; i < 8; ++i) {
    const OracleSpec spec = OracleSpec::parity(DigitString::unit(8, i, 2));
    const Transcript h = run_huffman_search(source, 3, spec);
    const Transcript w = run_walsh_search(spec);
    EXPECT_EQ(h.success, w.success);
    EXPECT_EQ(*h.recovered_item, *w.recovered_item);
    EXPECT_GE(h.final_outcome_probability, 1.0 - 1e-9);
  }
}

TEST(HuffmanSearch, ShortCodeFullRecovery) {
  const SourceDistribution source({0.5, 0.25, 0.25});
  for (std::size_t i = 0; i < 3; ++i) {
    const Transcript t = run_huffman_search(source, 2, OracleSpec::parity(DigitString::unit(3, i, 2)));
    EXPECT_TRUE(t.success);
    EXPECT_EQ(*t.recovered_item, i);
  }
}

TEST(HuffmanSearch, TruncatedCodeFailsOnCollidingItems) {
  const SourceDistribution source({0.5, 0.25, 0.25});
  const HuffmanCode code = build_huffman(source);
  double failure_mass = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const Transcript t = run_huffman_search(source, 1, OracleSpec::parity(DigitString::unit(3, i, 2)));
    EXPECT_EQ(t.oracle_calls, 1u);
    if (i == 0) {
      EXPECT_TRUE(t.success);
    } else {
      EXPECT_FALSE(t.success);
      EXPECT_FALSE(t.recovered.has_value());  // ambiguous, not wrong
      failure_mass += source[i];
    }
  }
  EXPECT_NEAR(failure_mass, truncation_error_probability(code, 1), 1e-12);
}

TEST(HuffmanSearch, CollidingPairGivesIdenticalStates) {
  // equal truncated codewords mean equal states up to global phase
  const SourceDistribution source({0.5, 0.25, 0.25});
  PipelineTrace a = run_huffman_search_traced(source, 1, OracleSpec::parity(DigitString::unit(3, 1, 2)));
  PipelineTrace b = run_huffman_search_traced(source, 1, OracleSpec::parity(DigitString::unit(3, 2, 2)));
  EXPECT_NEAR(std::abs(inner_product(*a.queried, *b.queried)), 1.0, 1e-12);
  PipelineTrace c = run_huffman_search_traced(source, 1, OracleSpec::parity(DigitString::unit(3, 0, 2)));
  EXPECT_LE(std::abs(inner_product(*a.queried, *c.queried)), 1e-12);
}

TEST(HuffmanSearch, DegenerateQueryRowsRejected) {
  // three nonzero distinct rows that XOR to zero
  const std::vector<DigitString> dependent{DigitString::parse("110", 2),
                                           DigitString::parse("101", 2),
                                           DigitString::parse("011", 2)};
  EXPECT_THROW(ensure_independent_query_rows(dependent), std::invalid_argument);
  // zero and duplicate rows are dropped before the rank check
  const std::vector<DigitString> droppable{DigitString::parse("000", 2),
                                           DigitString::parse("011", 2),
                                           DigitString::parse("011", 2)};
  ensure_independent_query_rows(droppable);
}

TEST(RandomCoding, LoneCandidateAlwaysSucceeds) {
  const std::vector<DigitString> pool{DigitString({2, 0, 1}, 3)};
  const Transcript t = run_random_coding(pool, 0, 5, OracleSpec::za_dot(pool[0]));
  EXPECT_TRUE(t.success);
  EXPECT_EQ(t.oracle_calls, 1u);
}

TEST(RandomCoding, BaseTwoFullCodeMatchesCoinWeighing) {
  // k = 2^n candidates with m = n reduces to a parity instance
  std::vector<DigitString> pool;
  for (std::uint64_t v = 0; v < 16; ++v) pool.push_back(DigitString::from_index(v, 4, 2));
  for (std::uint64_t v = 0; v < 16; ++v) {
    const Transcript r = run_random_coding(pool, 0, 77, OracleSpec::za_dot(pool[v]));
    const Transcript b = run_bv_coin_weighing(OracleSpec::spring_scale(pool[v]));
    ASSERT_TRUE(r.success);
    EXPECT_EQ(*r.recovered, *b.recovered);
  }
}

TEST(RandomCoding, FullRankSquareCodeNeverCollides) {
  // m = n makes the encoding a bijection, so failures are impossible
  std::mt19937_64 gen(8);
  std::size_t failures = 0;
  for (std::size_t trial = 0; trial < 200; ++trial) {
    std::set<std::uint64_t> seen;
    std::vector<DigitString> pool;
    while (pool.size() < 9) {
      const std::uint64_t v = rng::uniform_below(gen, 81);
      if (seen.insert(v).second) pool.push_back(DigitString::from_index(v, 4, 3));
    }
    const Transcript t = run_random_coding(pool, 2, gen(), OracleSpec::za_dot(pool[0]));
    failures += t.success ? 0 : 1;
  }
  EXPECT_EQ(failures, 0u);
}

TEST(RandomCoding, CollisionLawMonteCarlo) {
  // n - m large enough that conditioning on independent generators is immaterial
  const std::uint32_t a = 3;
  const std::size_t k = 9, l = 2, n = 11, trials = 10000;
  const std::size_t m = random_code_length(a, k, l);
  ASSERT_EQ(m, 4u);
  const double p = collision_probability(a, m, k);
  std::mt19937_64 gen(123);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<DigitString> pool;
    while (pool.size() < k) {
      std::vector<std::uint32_t> digits(n);
      for (auto& d : digits) d = rng::uniform_digit(gen, a);
      if (seen.insert(digits).second) pool.emplace_back(std::move(digits), a);
    }
    const std::size_t marked = rng::uniform_below(gen, k);
    const Transcript r = run_random_coding(pool, l, gen(), OracleSpec::za_dot(pool[marked]));
    EXPECT_EQ(r.oracle_calls, 1u);
    failures += r.success ? 0 : 1;
  }
  const double rate = static_cast<double>(failures) / trials;
  const double sigma = std::sqrt(p * (1.0 - p) / trials);
  EXPECT_NEAR(rate, p, 3.0 * sigma);
}

TEST(RandomCoding, EncodingEqualityDecidesStateOverlap) {
  // n > m so codeword collisions are possible; equal z means equal states up
  // to phase, distinct z means orthogonal states
  const GeneratorSet gens = random_generators(4, 2, 3, 444);
  std::vector<DigitString> pool;
  {
    // force one colliding pair into the pool: two strings from one caller-known
    // fiber of the encoding, then distinct fillers
    const DigitString base = DigitString::from_index(1, 4, 3);
    const std::uint64_t target = encode(gens, base).to_index();
    pool.push_back(base);
    for (std::uint64_t v = 2; v < 81 && pool.size() < 2; ++v) {
      const DigitString c = DigitString::from_index(v, 4, 3);
      if (encode(gens, c).to_index() == target) pool.push_back(c);
    }
    for (std::uint64_t v = 2; v < 81 && pool.size() < 9; ++v) {
      const DigitString c = DigitString::from_index(v, 4, 3);
      bool taken = false;
      for (const auto& existing : pool) taken = taken || existing == c;
      if (!taken) pool.push_back(c);
    }
  }
  std::vector<QuantumState> states;
  std::vector<std::uint64_t> encodings;
  for (const auto& y : pool) {
    PipelineTrace trace = run_random_coding_traced(pool, 0, 444, OracleSpec::za_dot(y));
    EXPECT_GE(trace.answer_register_fidelity, 1.0 - 1e-12);
    states.push_back(std::move(*trace.queried));
    encodings.push_back(encode(gens, y).to_index());
  }
  std::size_t equal_pairs = 0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double overlap = std::abs(inner_product(states[i], states[j]));
      if (encodings[i] == encodings[j]) {
        EXPECT_NEAR(overlap, 1.0, 1e-12);
        ++equal_pairs;
      } else {
        EXPECT_LE(overlap, 1e-12);
      }
    }
  EXPECT_GT(equal_pairs, 0u);  // 9 candidates into 9 codewords collide here
}

TEST(RandomCoding, ValidationAndCaps) {
  std::vector<DigitString> pool{DigitString({0, 0}, 3), DigitString({1, 2}, 3)};
  EXPECT_THROW(run_random_coding(pool, 0, 1, OracleSpec::za_dot(DigitString({2, 2}, 3))),
               std::invalid_argument);  // y not a candidate
  EXPECT_THROW(run_random_coding(pool, 5, 1, OracleSpec::za_dot(pool[0])),
               std::invalid_argument);  // m = 6 > n = 2
  std::vector<DigitString> big;
  for (std::uint64_t v = 0; v < 2; ++v) big.push_back(DigitString::from_index(v, 10, 5));
  EXPECT_THROW(run_random_coding(big, 8, 1, OracleSpec::za_dot(big[0])), resource_error);
}

TEST(Pipelines, DeterministicTranscripts) {
  const OracleSpec spec = OracleSpec::spring_scale(DigitString::parse("0110", 2));
  const Transcript a = run_bv_coin_weighing(spec);
  const Transcript b = run_bv_coin_weighing(spec);
  EXPECT_EQ(a.recovered, b.recovered);
  EXPECT_EQ(a.final_outcome_probability, b.final_outcome_probability);
}

TEST(Pipelines, EntropyOfPostQueryEnsembleEqualsDatabaseEntropy) {
  const std::size_t n = 4;
  std::vector<std::pair<double, QuantumState>> ensemble;
  for (std::uint64_t v = 0; v < (1u << n); ++v) {
    PipelineTrace trace =
        run_bv_coin_weighing_traced(OracleSpec::spring_scale(DigitString::from_index(v, n, 2)));
    ensemble.push_back({1.0 / 16.0, std::move(*trace.queried)});
  }
  EXPECT_NEAR(von_neumann_entropy(ensemble), 4.0, 1e-9);
}

TEST(Pipelines, TracedFidelityAcrossAllFour) {
  const PipelineTrace bv =
      run_bv_coin_weighing_traced(OracleSpec::spring_scale(DigitString::parse("101", 2)));
  EXPECT_GE(bv.answer_register_fidelity, 1.0 - 1e-12);
  const PipelineTrace walsh =
      run_walsh_search_traced(OracleSpec::parity(DigitString::unit(4, 2, 2)));
  EXPECT_GE(walsh.answer_register_fidelity, 1.0 - 1e-12);
  const PipelineTrace huffman = run_huffman_search_traced(
      SourceDistribution({0.5, 0.25, 0.25}), 2, OracleSpec::parity(DigitString::unit(3, 1, 2)));
  EXPECT_GE(huffman.answer_register_fidelity, 1.0 - 1e-12);
  std::vector<DigitString> pool;
  for (std::uint64_t v = 0; v < 5; ++v) pool.push_back(DigitString::from_index(v, 3, 5));
  const PipelineTrace random =
      run_random_coding_traced(pool, 1, 9, OracleSpec::za_dot(pool[3]));
  EXPECT_GE(random.answer_register_fidelity, 1.0 - 1e-12);
}
