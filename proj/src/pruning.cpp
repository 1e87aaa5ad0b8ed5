#include "msr/pruning.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace msr {

namespace {

// Comparisons run on pe directly: 1 - pe_a < 1 - pe_b  <=>  pe_a > pe_b, and
// pe carries more precision than its complement for small values.
bool le(double x, double y, double tol) { return x < y || approx_equal(x, y, tol); }
bool lt(double x, double y, double tol) { return x < y && !approx_equal(x, y, tol); }

bool precedes(const Candidate& a, const Candidate& b, double tol) {
  return (le(a.f1, b.f1, tol) && lt(b.pe, a.pe, tol)) || (lt(a.f1, b.f1, tol) && le(b.pe, a.pe, tol));
}

std::uint16_t group_of(const Candidate& c, BatchGroup group) {
  std::uint16_t g = c.seq.source().value;
  if (group == BatchGroup::source_and_destination) g |= static_cast<std::uint16_t>(c.seq.destination().value << 8);
  return g;
}

bool batch_less(const Candidate& a, const Candidate& b) {
  if (a.seq.source() != b.seq.source()) return a.seq.source() < b.seq.source();
  if (a.f1 != b.f1) return a.f1 < b.f1;
  if (a.seq.mask() != b.seq.mask()) return a.seq.mask() < b.seq.mask();
  return a.seq < b.seq;
}

// Exact two-dimensional sweep over one group sorted by f1 ascending, pe
// descending.
void sweep_group(std::span<const Candidate*> group, std::vector<Candidate>& out) {
  double best_prev_pe = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < group.size()) {
    std::size_t j = i;
    while (j < group.size() && group[j]->f1 == group[i]->f1) ++j;
    const double block_max = group[i]->pe;  // sorted by pe descending within equal f1
    if (block_max > best_prev_pe) {
      for (std::size_t k = i; k < j && group[k]->pe == block_max; ++k) out.push_back(*group[k]);
    }
    best_prev_pe = std::max(best_prev_pe, block_max);
    i = j;
  }
}

void quadratic_group(std::span<const Candidate*> group, double tol, std::vector<Candidate>& out) {
  for (const Candidate* x : group) {
    const bool dominated = std::any_of(group.begin(), group.end(), [&](const Candidate* y) {
      return y != x && precedes(*y, *x, tol);
    });
    if (!dominated) out.push_back(*x);
  }
}

}  // namespace

Precedence iterative_precedence(const Candidate& a, const Candidate& b, double tol) {
  if (approx_equal(a.f1, b.f1, tol) && approx_equal(a.pe, b.pe, tol)) return Precedence::equivalent;
  if (precedes(a, b, tol)) return Precedence::first_precedes;
  if (precedes(b, a, tol)) return Precedence::second_precedes;
  return Precedence::incomparable;
}

bool canonical_less(const Candidate& a, const Candidate& b) {
  if (a.seq.source() != b.seq.source()) return a.seq.source() < b.seq.source();
  if (a.seq.mask() != b.seq.mask()) return a.seq.mask() < b.seq.mask();
  return a.seq < b.seq;
}

// ---------------------------------------------------------------------------
// LevelIndex

LevelIndex::Key LevelIndex::key_of(const Candidate& c) const {
  std::uint16_t sd = c.seq.source().value;
  if (by_destination_) sd |= static_cast<std::uint16_t>(c.seq.destination().value << 8);
  return Key{c.seq.mask(), sd};
}

InsertResult LevelIndex::insert(const Candidate& p) {
  InsertResult result;
  auto [it, inserted] = buckets_.try_emplace(key_of(p));
  auto& bucket = it->second;
  if (inserted) {
    bucket.push_back(p);
    ++live_;
    result.outcome = InsertOutcome::kept_new;
    return result;
  }

  double bucket_min = bucket.front().f1;
  for (const auto& q : bucket) bucket_min = std::min(bucket_min, q.f1);

  if (approx_equal(p.f1, bucket_min, tol_)) {
    // With a positive tolerance a tie may lower the minimum; members that fall
    // out of tolerance of the new minimum are evicted.
    if (p.f1 < bucket_min) {
      auto keep_end = std::stable_partition(bucket.begin(), bucket.end(),
                                            [&](const Candidate& q) { return approx_equal(q.f1, p.f1, tol_); });
      result.evicted.assign(keep_end, bucket.end());
      bucket.erase(keep_end, bucket.end());
      live_ -= result.evicted.size();
    }
    bucket.push_back(p);
    ++live_;
    result.outcome = InsertOutcome::kept_tie;
  } else if (p.f1 < bucket_min) {
    result.evicted = std::move(bucket);
    live_ -= result.evicted.size();
    bucket.assign(1, p);
    ++live_;
    result.outcome = InsertOutcome::kept_new;
  } else {
    result.outcome = InsertOutcome::discarded;
  }
  return result;
}

std::vector<Candidate> LevelIndex::snapshot() const {
  std::vector<Candidate> out;
  out.reserve(live_);
  for (const auto& [key, bucket] : buckets_) out.insert(out.end(), bucket.begin(), bucket.end());
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Candidate> LevelIndex::drain() {
  auto out = snapshot();
  buckets_.clear();
  live_ = 0;
  return out;
}

bool LevelIndex::invariant_holds() const {
  std::size_t counted = 0;
  for (const auto& [key, bucket] : buckets_) {
    if (bucket.empty()) return false;
    double bucket_min = bucket.front().f1;
    for (const auto& q : bucket) bucket_min = std::min(bucket_min, q.f1);
    for (const auto& q : bucket) {
      if (!(key_of(q) == key)) return false;
      if (!approx_equal(q.f1, bucket_min, tol_)) return false;
    }
    counted += bucket.size();
  }
  return counted == live_;
}

// ---------------------------------------------------------------------------
// Batch pruning

BatchResult batch_prune(std::span<const Candidate> level, double tol, BatchGroup group) {
  BatchResult result;
  result.stats.enumerated = level.size();
  if (level.empty()) return result;

  std::vector<const Candidate*> order(level.size());
  std::transform(level.begin(), level.end(), order.begin(), [](const Candidate& c) { return &c; });
  std::sort(order.begin(), order.end(), [&](const Candidate* a, const Candidate* b) {
    const auto ga = group_of(*a, group);
    const auto gb = group_of(*b, group);
    if (ga != gb) return ga < gb;
    if (a->f1 != b->f1) return a->f1 < b->f1;
    return a->pe > b->pe;
  });

  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const auto g = group_of(*order[i], group);
    while (j < order.size() && group_of(*order[j], group) == g) ++j;
    std::span<const Candidate*> part(order.data() + i, j - i);
    if (tol == 0.0) {
      sweep_group(part, result.survivors);
    } else {
      quadratic_group(part, tol, result.survivors);
    }
    i = j;
  }

  std::sort(result.survivors.begin(), result.survivors.end(), batch_less);
  result.stats.kept = result.survivors.size();
  return result;
}

double ip_theoretical_ratio(int length) {
  if (length < 3) {
    throw Error(ErrorKind::out_of_domain,
                "incremental pruning applies to lengths >= 3, got " + std::to_string(length));
  }
  double factorial = 1.0;
  for (int k = 2; k < length; ++k) factorial *= k;
  return 1.0 - 1.0 / factorial;
}

}  // namespace msr
