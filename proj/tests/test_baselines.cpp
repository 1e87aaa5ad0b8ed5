#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "msr/baselines.hpp"
#include "msr/growth.hpp"
#include "support/oracles.hpp"

using namespace msr;

namespace {

Instance generic_instance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> probs(n);
  std::vector<Coord> coords(n);
  for (int i = 0; i < n; ++i) {
    probs[i] = u(rng);
    coords[i] = {100 * u(rng), 100 * u(rng)};
  }
  return Instance::from_coordinates(probs, coords, 150.0 * (n + 1));
}

// Five points c1..c5 (ids 0..4): <c1,c2,c5> dominates <c1,c4,c5> and precedes
// <c1,c3,c5> without dominating it.
Instance dominance_example() {
  std::vector<double> costs(25, 3.0);
  auto set = [&](int i, int j, double d) { costs[i * 5 + j] = costs[j * 5 + i] = d; };
  for (int i = 0; i < 5; ++i) costs[i * 5 + i] = 0.0;
  set(0, 1, 1.0);
  set(1, 4, 1.0);
  set(0, 3, 2.0);
  set(3, 4, 2.0);
  set(0, 2, 0.5);
  set(2, 4, 5.0);
  return Instance({0.6, 0.5, 0.4, 0.3, 0.5}, costs, 100.0);
}

}  // namespace

TEST(Enumeration, Counts) {
  EXPECT_EQ(sequence_count(3, 3), 6u);
  EXPECT_EQ(sequence_count(10, 3), 720u);
  EXPECT_EQ(sequence_count(4, 1), 4u);
  EXPECT_EQ(sequence_count(4, 0), 1u);
  auto inst3 = generic_instance(3, 1);
  EXPECT_EQ(enumerate_sequences(inst3, 3).size(), 6u);
  auto inst10 = generic_instance(10, 1);
  for (int length = 1; length <= 4; ++length) {
    EXPECT_EQ(enumerate_sequences(inst10, length).size(), oracle::choose(10, length) * oracle::factorial(length));
  }
  EXPECT_THROW((void)enumerate_sequences(inst3, 0), Error);
  EXPECT_THROW((void)enumerate_sequences(inst3, 4), Error);
}

TEST(Enumeration, LexicographicWithoutDuplicates) {
  auto inst = generic_instance(5, 1);
  auto seqs = enumerate_sequences(inst, 3);
  EXPECT_TRUE(std::is_sorted(seqs.begin(), seqs.end()));
  EXPECT_EQ(std::adjacent_find(seqs.begin(), seqs.end()), seqs.end());
  EXPECT_EQ(seqs.front(), (Sequence{0, 1, 2}));
  EXPECT_EQ(seqs.back(), (Sequence{4, 3, 2}));
}

TEST(BruteForce, WorkedExample) {
  auto inst = fixtures::worked_example();
  auto result = brute_force(inst, fixtures::worked_origin(), 2, 2);
  ASSERT_EQ(result.routes.size(), 1u);
  EXPECT_EQ(result.routes[0].candidate.seq, (Sequence{1, 2}));
  EXPECT_NEAR(result.cost, 5.4, 5.4 * 1e-12);
  EXPECT_EQ(result.evaluated, 6u);
}

TEST(BruteForce, SinglePointArgmin) {
  auto inst = generic_instance(7, 4);
  std::vector<double> d0(7);
  for (int i = 0; i < 7; ++i) d0[i] = 10.0 + i;
  auto result = brute_force(inst, Origin::with_costs(d0), 1, 1);
  double best = 1e300;
  int arg = -1;
  for (int i = 0; i < 7; ++i) {
    const double p = inst.prob(PointId(i));
    const double c = d0[i] * p + inst.horizon() * (1 - p);
    if (c < best) best = c, arg = i;
  }
  EXPECT_EQ(result.routes[0].candidate.seq, Sequence{arg});
  EXPECT_TRUE(approx_equal(result.cost, best, 1e-12));
}

TEST(BruteForce, AgreesWithRecursiveEnumerator) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 140.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = generic_instance(6, seed);
    std::vector<double> d0(6);
    for (auto& d : d0) d = u(rng);
    for (int lo = 1; lo <= 6; ++lo) {
      for (int hi = lo; hi <= 6; ++hi) {
        auto ours = brute_force(inst, Origin::with_costs(d0), lo, hi);
        auto ref = oracle::exhaustive(inst, d0, lo, hi);
        EXPECT_TRUE(approx_equal(ours.cost, ref.cost, 1e-12));
        ASSERT_FALSE(ours.routes.empty());
        const auto& best = ours.routes[0].candidate;
        EXPECT_TRUE(approx_equal(best.f1, f1_direct(best.seq, inst), 0.0));
        EXPECT_TRUE(approx_equal(best.pe, pe_closed(best.seq, inst), 0.0));
      }
    }
  }
}

TEST(BruteForce, DestinationAndTies) {
  Instance inst({0.5, 0.5, 0.2}, {0, 1, 1, 1, 0, 1, 1, 1, 0}, 10.0);
  auto ties = brute_force(inst, Origin::with_costs({1, 1, 1}), 1, 1);
  EXPECT_EQ(ties.routes.size(), 2u);
  auto dest = brute_force(inst, Origin::with_costs({1, 1, 1}), 2, 2, PointId(2));
  for (const auto& r : dest.routes) EXPECT_EQ(r.candidate.seq.destination(), PointId(2));
}

TEST(BruteForce, SizeGuard) {
  auto inst = generic_instance(11, 1);
  try {
    (void)brute_force(inst, Origin::at_point(PointId(0)), 1, 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
  EXPECT_NO_THROW((void)brute_force(inst, Origin::at_point(PointId(0)), 1, 3));
}

TEST(DpVector, Layout) {
  auto inst = dominance_example();
  auto v = dp_vector(Sequence{0, 1, 4}, inst);
  EXPECT_EQ(v, (std::vector<double>{1.0, 0.5, 1.0, 0.5}));
  EXPECT_EQ(dp_vector(Sequence{2, 3}, inst).size(), 2u);
  EXPECT_THROW((void)dp_vector(Sequence{1}, inst), Error);

  auto rand = generic_instance(8, 3);
  Sequence s{5, 2, 7, 0};
  auto w = dp_vector(s, rand);
  for (int k = 1; k < 4; ++k) {
    EXPECT_EQ(w[2 * (k - 1)], rand.cost(s[k - 1], s[k]));
    EXPECT_EQ(w[2 * (k - 1) + 1], 1.0 - rand.prob(s[k]));
  }
}

TEST(Lcp, DominanceExample) {
  auto inst = dominance_example();
  const std::vector<Sequence> seqs = {Sequence{0, 1, 4}, Sequence{0, 2, 4}, Sequence{0, 3, 4}};
  EXPECT_TRUE(dp_dominates(dp_vector(seqs[0], inst), dp_vector(seqs[2], inst)));
  EXPECT_FALSE(dp_dominates(dp_vector(seqs[0], inst), dp_vector(seqs[1], inst)));

  auto result = lcp_prune(seqs, inst);
  EXPECT_EQ(result.survivors, (std::vector<Sequence>{Sequence{0, 1, 4}, Sequence{0, 2, 4}}));
  EXPECT_EQ(result.stats.enumerated, 3u);
  EXPECT_EQ(result.stats.kept, 2u);

  // The survivor <c1,c3,c5> is nonetheless preceded by <c1,c2,c5>.
  auto r1 = Candidate{seqs[0], f1_direct(seqs[0], inst), pe_closed(seqs[0], inst)};
  auto r3 = Candidate{seqs[1], f1_direct(seqs[1], inst), pe_closed(seqs[1], inst)};
  EXPECT_EQ(iterative_precedence(r1, r3), Precedence::first_precedes);
}

TEST(Lcp, EqualVectorsAreKept) {
  std::vector<double> costs = {0, 1, 1, 2, 1, 0, 2, 1, 1, 2, 0, 1, 2, 1, 1, 0};
  Instance inst({0.5, 0.4, 0.4, 0.3}, costs, 100.0);
  const std::vector<Sequence> seqs = {Sequence{0, 1, 3}, Sequence{0, 2, 3}};
  EXPECT_EQ(dp_vector(seqs[0], inst), dp_vector(seqs[1], inst));
  EXPECT_EQ(lcp_prune(seqs, inst).survivors.size(), 2u);
}

TEST(Lcp, MatchesPairwiseDefinition) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto inst = generic_instance(7, seed);
    for (int length = 2; length <= 5; ++length) {
      auto seqs = enumerate_sequences(inst, length);
      std::vector<Sequence> expected;
      for (const auto& b : seqs) {
        const auto vb = dp_vector(b, inst);
        bool dominated = false;
        for (const auto& a : seqs) {
          if (a.source() != b.source() || a.destination() != b.destination()) continue;
          if (dp_dominates(dp_vector(a, inst), vb)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) expected.push_back(b);
      }
      EXPECT_EQ(lcp_prune(seqs, inst).survivors, expected) << "length " << length;
      EXPECT_EQ(lcp_prune_level(inst, length).survivors, expected);
    }
  }
}

TEST(Lcp, NoPruningAtFullLength) {
  auto inst = generic_instance(7, 5);
  auto result = lcp_prune_level(inst, 7, false);
  EXPECT_EQ(result.stats.enumerated, oracle::factorial(7));
  EXPECT_EQ(result.stats.kept, result.stats.enumerated);
  EXPECT_EQ(result.stats.ratio(), 0.0);
  EXPECT_TRUE(result.survivors.empty());
}

TEST(Lcp, SurvivorsKeepTheOptimum) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 140.0);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto inst = generic_instance(7, seed);
    for (int length = 2; length <= 7; ++length) {
      auto survivors = lcp_prune_level(inst, length).survivors;
      for (int t = 0; t < 5; ++t) {
        std::vector<double> d0(7);
        for (auto& d : d0) d = u(rng);
        const Origin origin = Origin::with_costs(d0);
        double best = 1e300;
        for (const auto& s : survivors) best = std::min(best, ptd_direct(origin, s, inst));
        EXPECT_TRUE(approx_equal(best, brute_force(inst, origin, length, length).cost, 0.0));
      }
    }
  }
}

TEST(Lcp, MixedLengthsRejected) {
  auto inst = generic_instance(4, 1);
  const std::vector<Sequence> seqs = {Sequence{0, 1}, Sequence{0, 1, 2}};
  EXPECT_THROW((void)lcp_prune(seqs, inst), Error);
}
