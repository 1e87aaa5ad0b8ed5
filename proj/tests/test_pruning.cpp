#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "msr/pruning.hpp"
#include "support/oracles.hpp"

using namespace msr;

namespace {

Candidate cand(std::initializer_list<int> pts, double f1, double pe) { return Candidate{Sequence(pts), f1, pe}; }

}  // namespace

TEST(Precedence, ParetoCases) {
  auto a = cand({0, 1, 2}, 3.0, 0.9);
  EXPECT_EQ(iterative_precedence(a, cand({0, 2, 1}, 4.0, 0.8)), Precedence::first_precedes);
  EXPECT_EQ(iterative_precedence(a, cand({0, 2, 1}, 3.0, 0.8)), Precedence::first_precedes);
  EXPECT_EQ(iterative_precedence(a, cand({0, 2, 1}, 2.0, 0.9)), Precedence::second_precedes);
  EXPECT_EQ(iterative_precedence(a, cand({0, 2, 1}, 3.0, 0.9)), Precedence::equivalent);
  EXPECT_EQ(iterative_precedence(a, cand({0, 2, 1}, 2.0, 0.8)), Precedence::incomparable);
}

TEST(Precedence, Tolerance) {
  auto a = cand({0, 1}, 3.0, 0.9);
  auto b = cand({0, 2}, 3.0 * (1 + 1e-13), 0.9);
  EXPECT_EQ(iterative_precedence(a, b), Precedence::first_precedes);
  EXPECT_EQ(iterative_precedence(a, b, 1e-12), Precedence::equivalent);
}

TEST(LevelIndex, KeepsOnlyMinimumPerKey) {
  LevelIndex index;
  EXPECT_EQ(index.insert(cand({0, 1, 2}, 5.0, 0.9)).outcome, InsertOutcome::kept_new);
  EXPECT_EQ(index.insert(cand({0, 2, 1}, 6.0, 0.9)).outcome, InsertOutcome::discarded);
  auto r = index.insert(cand({0, 2, 1}, 4.0, 0.9));
  EXPECT_EQ(r.outcome, InsertOutcome::kept_new);
  ASSERT_EQ(r.evicted.size(), 1u);
  EXPECT_EQ(r.evicted[0].seq, (Sequence{0, 1, 2}));
  // Different source, same point set: separate bucket.
  EXPECT_EQ(index.insert(cand({1, 0, 2}, 9.0, 0.9)).outcome, InsertOutcome::kept_new);
  EXPECT_EQ(index.bucket_count(), 2u);
  EXPECT_EQ(index.candidate_count(), 2u);
  EXPECT_TRUE(index.invariant_holds());
}

TEST(LevelIndex, KeepsExactTies) {
  LevelIndex index;
  index.insert(cand({0, 1, 2, 3}, 5.0, 0.9));
  EXPECT_EQ(index.insert(cand({0, 2, 1, 3}, 5.0, 0.9)).outcome, InsertOutcome::kept_tie);
  EXPECT_EQ(index.insert(cand({0, 3, 2, 1}, 5.5, 0.9)).outcome, InsertOutcome::discarded);
  EXPECT_EQ(index.candidate_count(), 2u);
  auto all = index.drain();
  EXPECT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].seq, (Sequence{0, 1, 2, 3}));
  EXPECT_EQ(index.candidate_count(), 0u);
}

TEST(LevelIndex, DestinationKeySeparatesBuckets) {
  LevelIndex plain;
  LevelIndex keyed(true);
  for (auto* index : {&plain, &keyed}) {
    index->insert(cand({0, 1, 2}, 5.0, 0.9));
    index->insert(cand({0, 2, 1}, 4.0, 0.9));
  }
  EXPECT_EQ(plain.candidate_count(), 1u);
  EXPECT_EQ(keyed.candidate_count(), 2u);
  EXPECT_TRUE(keyed.invariant_holds());
}

TEST(LevelIndex, ToleranceTieLowersMinimum) {
  LevelIndex index(false, 1e-3);
  index.insert(cand({0, 1, 2, 3}, 1.0, 0.5));
  EXPECT_EQ(index.insert(cand({0, 2, 1, 3}, 1.0009, 0.5)).outcome, InsertOutcome::kept_tie);
  auto r = index.insert(cand({0, 3, 2, 1}, 0.9995, 0.5));
  EXPECT_EQ(r.outcome, InsertOutcome::kept_tie);
  ASSERT_EQ(r.evicted.size(), 1u);
  EXPECT_EQ(r.evicted[0].seq, (Sequence{0, 2, 1, 3}));
  EXPECT_EQ(index.candidate_count(), 2u);
  EXPECT_TRUE(index.invariant_holds());
}

TEST(BatchPrune, MatchesQuadraticParetoOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    // Coarse values so exact ties and duplicates occur.
    std::uniform_int_distribution<int> f(0, 6), p(0, 6);
    std::vector<Candidate> level;
    std::vector<int> ids = {1, 2, 3, 4, 5};
    for (int k = 0; k < 40; ++k) {
      std::shuffle(ids.begin(), ids.end(), rng);
      Sequence s{0, ids[0], ids[1], ids[2]};
      if (std::any_of(level.begin(), level.end(), [&](const Candidate& c) { return c.seq == s; })) continue;
      level.push_back(Candidate{s, static_cast<double>(f(rng)), p(rng) / 6.0});
    }
    std::vector<oracle::Point2> pts;
    for (const auto& c : level) pts.push_back({c.f1, c.pe});
    auto front = oracle::pareto_front(pts);

    auto result = batch_prune(level);
    ASSERT_EQ(result.survivors.size(), front.size()) << "trial " << trial;
    for (std::size_t i : front) {
      EXPECT_NE(std::find(result.survivors.begin(), result.survivors.end(), level[i]), result.survivors.end());
    }
    EXPECT_EQ(result.stats.enumerated, level.size());
    EXPECT_EQ(result.stats.kept, front.size());

    // The tolerance path agrees with the sweep when values are far apart.
    auto loose = batch_prune(level, 1e-15);
    EXPECT_EQ(loose.survivors, result.survivors);
  }
}

TEST(BatchPrune, GroupsBySourceOrDestination) {
  std::vector<Candidate> level = {cand({0, 1, 2}, 1.0, 0.9), cand({0, 2, 1}, 2.0, 0.8), cand({1, 0, 2}, 3.0, 0.1)};
  EXPECT_EQ(batch_prune(level).survivors.size(), 2u);
  EXPECT_EQ(batch_prune(level, 0.0, BatchGroup::source_and_destination).survivors.size(), 3u);
}

TEST(BatchPrune, KeepsEquivalentCandidates) {
  std::vector<Candidate> level = {cand({0, 1, 2}, 1.0, 0.9), cand({0, 2, 1}, 1.0, 0.9), cand({0, 3, 1}, 1.0, 0.8)};
  auto r = batch_prune(level);
  EXPECT_EQ(r.survivors.size(), 2u);
  EXPECT_NEAR(r.stats.ratio(), 1.0 / 3.0, 1e-15);
}

TEST(PruningRatio, TheoreticalValues) {
  EXPECT_EQ(ip_theoretical_ratio(3), 0.5);
  EXPECT_NEAR(ip_theoretical_ratio(5), 0.9583333333333334, 1e-15);
  EXPECT_NEAR(ip_theoretical_ratio(6), 0.9916666666666667, 1e-15);
  EXPECT_THROW((void)ip_theoretical_ratio(2), Error);
}
