#include "msr/growth.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>

namespace msr {

namespace {

using Clock = std::chrono::steady_clock;

struct ShardOutput {
  std::vector<Candidate> level;
  std::size_t enumerated = 0;
  std::size_t peak_live = 0;
};

// Extends every candidate of `prev` with the points in `new_sources`. All
// candidates produced here start at one of those points, so shards with
// disjoint point sets never share an index key.
ShardOutput grow_shard(std::span<const Candidate> prev, const Instance& inst, std::span<const PointId> new_sources,
                       bool keyed_by_destination, double tol) {
  ShardOutput out;
  LevelIndex index(keyed_by_destination, tol);
  for (const Candidate& r : prev) {
    for (PointId c : new_sources) {
      if (r.seq.contains(c)) continue;
      ++out.enumerated;
      index.insert(extend_candidate(c, r, inst));
      out.peak_live = std::max(out.peak_live, index.candidate_count());
    }
  }
  out.level = index.drain();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CandidateStore

void CandidateStore::set_level(int length, std::vector<Candidate> candidates) {
  if (length < 1 || length > kMaxPoints) {
    throw Error(ErrorKind::invariant, "level length out of range: " + std::to_string(length));
  }
  std::vector<const Sequence*> seqs;
  seqs.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.seq.size() != length) {
      throw Error(ErrorKind::invariant, "candidate of length " + std::to_string(c.seq.size()) +
                                            " stored in level " + std::to_string(length));
    }
    seqs.push_back(&c.seq);
  }
  std::sort(seqs.begin(), seqs.end(), [](const Sequence* a, const Sequence* b) { return *a < *b; });
  if (std::adjacent_find(seqs.begin(), seqs.end(), [](const Sequence* a, const Sequence* b) { return *a == *b; }) !=
      seqs.end()) {
    throw Error(ErrorKind::invariant, "duplicate candidate in level " + std::to_string(length));
  }
  levels_[length] = std::move(candidates);
}

std::span<const Candidate> CandidateStore::level(int length) const {
  auto it = levels_.find(length);
  if (it == levels_.end()) {
    throw Error(ErrorKind::missing_level, "store has no level " + std::to_string(length));
  }
  return it->second;
}

std::size_t CandidateStore::total_candidates() const {
  std::size_t total = 0;
  for (const auto& [length, level] : levels_) total += level.size();
  return total;
}

void CandidateStore::check_instance(const Instance& inst) const {
  if (inst.fingerprint() != fingerprint_) {
    throw Error(ErrorKind::mismatch, "store was grown from a different instance");
  }
}

std::size_t GenerationStats::total_enumerated() const {
  std::size_t total = 0;
  for (const auto& l : levels) total += l.enumerated_extensions;
  return total;
}

// ---------------------------------------------------------------------------
// Growth

LevelResult generate_level(std::span<const Candidate> prev, const Instance& inst, const GrowthOptions& opts) {
  const int n = inst.size();
  const bool by_dest = opts.keyed_by_destination || opts.destination.has_value();
  std::vector<PointId> points;
  for (int i = 0; i < n; ++i) points.emplace_back(i);

  LevelResult result;
  const int threads = std::clamp(opts.threads, 1, n);
  if (threads == 1) {
    auto shard = grow_shard(prev, inst, points, by_dest, opts.tol);
    result.level = std::move(shard.level);
    result.enumerated = shard.enumerated;
    result.peak_live = prev.size() + shard.peak_live;
    return result;
  }

  std::vector<ShardOutput> shards(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      shards[i] = grow_shard(prev, inst, std::span<const PointId>(&points[i], 1), by_dest, opts.tol);
    }
  };
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();

  std::size_t peak = 0;
  for (auto& shard : shards) {
    result.enumerated += shard.enumerated;
    peak += shard.peak_live;
    result.level.insert(result.level.end(), shard.level.begin(), shard.level.end());
  }
  std::sort(result.level.begin(), result.level.end(), canonical_less);
  result.peak_live = prev.size() + peak;
  return result;
}

GrowthResult bp_growth(const Instance& inst, int l_max, const GrowthOptions& opts) {
  const int n = inst.size();
  if (l_max < 1 || l_max > n) {
    throw Error(ErrorKind::invalid_argument, "l_max must be in [1, " + std::to_string(n) + "], got " +
                                                 std::to_string(l_max));
  }
  if (opts.destination && opts.destination->index() >= n) {
    throw Error(ErrorKind::invalid_argument, "destination " + std::to_string(opts.destination->index()) +
                                                 " not in instance");
  }
  const bool by_dest = opts.keyed_by_destination || opts.destination.has_value();
  const BatchGroup group = by_dest ? BatchGroup::source_and_destination : BatchGroup::source;

  GrowthResult result;
  result.store = CandidateStore(inst.fingerprint(), opts.batch ? StoreMode::ip_plus_batch : StoreMode::ip_only,
                                opts.destination, by_dest);

  auto emit = [&](int length, const std::vector<Candidate>& ip_level, LevelStats stats, Clock::time_point start) {
    stats.length = length;
    stats.kept_after_ip = ip_level.size();
    if (opts.batch) {
      auto view = batch_prune(ip_level, opts.tol, group);
      stats.kept_after_batch = view.survivors.size();
      result.store.set_level(length, std::move(view.survivors));
    } else {
      stats.kept_after_batch = ip_level.size();
      result.store.set_level(length, ip_level);
    }
    stats.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    result.stats.levels.push_back(stats);
  };

  auto start = Clock::now();
  std::vector<Candidate> prev;
  if (opts.destination) {
    prev.push_back(seed_candidate(*opts.destination, inst));
  } else {
    for (int i = 0; i < n; ++i) prev.push_back(seed_candidate(PointId(i), inst));
  }
  LevelStats seeds;
  seeds.enumerated_extensions = prev.size();
  seeds.peak_live_candidates = prev.size();
  emit(1, prev, seeds, start);

  for (int length = 2; length <= l_max; ++length) {
    start = Clock::now();
    auto grown = generate_level(prev, inst, opts);
    LevelStats stats;
    stats.enumerated_extensions = grown.enumerated;
    stats.peak_live_candidates = grown.peak_live;
    emit(length, grown.level, stats, start);
    prev = std::move(grown.level);
  }
  return result;
}

CandidateStore store_batch_view(const CandidateStore& store, double tol) {
  if (store.mode() != StoreMode::ip_only) {
    throw Error(ErrorKind::invariant, "batch view must be derived from an incremental-pruning store");
  }
  const BatchGroup group = store.keyed_by_destination() ? BatchGroup::source_and_destination : BatchGroup::source;
  CandidateStore view(store.fingerprint(), StoreMode::ip_plus_batch, store.destination(),
                      store.keyed_by_destination());
  for (const auto& [length, level] : store.levels()) {
    view.set_level(length, batch_prune(level, tol, group).survivors);
  }
  return view;
}

std::uint64_t generation_work_bound(int n) {
  if (n < 1) throw Error(ErrorKind::out_of_domain, "work bound needs n >= 1");
  if (n == 1) return 1;
  std::uint64_t pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);
  std::uint64_t scaled = 0;
  if (n - 2 >= 64 || __builtin_mul_overflow(pairs, std::uint64_t{1} << (n - 2), &scaled)) {
    throw Error(ErrorKind::out_of_domain, "work bound overflows 64 bits for n = " + std::to_string(n));
  }
  return static_cast<std::uint64_t>(n) + scaled;
}

}  // namespace msr
