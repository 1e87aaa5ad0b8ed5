#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "msr/core.hpp"
#include "msr/pruning.hpp"

namespace msr {

enum class StoreMode { ip_only, ip_plus_batch };

/// Per-length candidate sets produced offline and scanned online. Tagged with
/// the fingerprint of the instance they were grown from.
class CandidateStore {
 public:
  CandidateStore() = default;
  CandidateStore(std::uint64_t fingerprint, StoreMode mode, std::optional<PointId> destination = {},
                 bool keyed_by_destination = false)
      : fingerprint_(fingerprint),
        mode_(mode),
        destination_(destination),
        keyed_by_destination_(keyed_by_destination || destination.has_value()) {}

  /// Replaces level `length`. Throws ErrorKind::invariant if a candidate has
  /// the wrong length or appears twice.
  void set_level(int length, std::vector<Candidate> candidates);

  bool has_level(int length) const { return levels_.contains(length); }
  /// Throws ErrorKind::missing_level when the level was never built.
  std::span<const Candidate> level(int length) const;
  const std::map<int, std::vector<Candidate>>& levels() const { return levels_; }
  int max_level() const { return levels_.empty() ? 0 : levels_.rbegin()->first; }
  std::size_t total_candidates() const;

  std::uint64_t fingerprint() const { return fingerprint_; }
  StoreMode mode() const { return mode_; }
  std::optional<PointId> destination() const { return destination_; }
  /// True when pruning compared only candidates sharing a destination, so
  /// filtering by destination keeps every optimum.
  bool keyed_by_destination() const { return keyed_by_destination_; }

  /// Throws ErrorKind::mismatch unless the store was grown from `inst`.
  void check_instance(const Instance& inst) const;

  friend bool operator==(const CandidateStore&, const CandidateStore&) = default;

 private:
  std::uint64_t fingerprint_ = 0;
  StoreMode mode_ = StoreMode::ip_only;
  std::optional<PointId> destination_;
  bool keyed_by_destination_ = false;
  std::map<int, std::vector<Candidate>> levels_;
};

struct LevelStats {
  int length = 0;
  std::size_t enumerated_extensions = 0;
  std::size_t kept_after_ip = 0;
  std::size_t kept_after_batch = 0;
  std::size_t peak_live_candidates = 0;
  std::chrono::nanoseconds wall_time{0};
};

struct GenerationStats {
  std::vector<LevelStats> levels;

  std::size_t total_enumerated() const;
};

struct GrowthOptions {
  bool batch = false;
  /// Grow only sequences ending here.
  std::optional<PointId> destination;
  /// Grow from every point but prune only among candidates sharing a
  /// destination (implied by `destination`).
  bool keyed_by_destination = false;
  double tol = 0.0;
  /// Worker threads for level generation; output is identical for any value.
  int threads = 1;
};

struct LevelResult {
  std::vector<Candidate> level;
  std::size_t enumerated = 0;
  std::size_t peak_live = 0;
};

/// One backward growth step: prepend every absent point to every candidate of
/// `prev` and keep the incremental-pruning survivors, in canonical order.
LevelResult generate_level(std::span<const Candidate> prev, const Instance& inst,
                           const GrowthOptions& opts = {});

struct GrowthResult {
  CandidateStore store;
  GenerationStats stats;
};

/// Grows levels 1..l_max. With opts.batch the returned store holds the batch
/// pruned view of every level; growth itself always continues from the
/// incremental-pruning survivors.
GrowthResult bp_growth(const Instance& inst, int l_max, const GrowthOptions& opts = {});

/// Batch-pruned copy of an incremental-pruning store.
CandidateStore store_batch_view(const CandidateStore& store, double tol = 0.0);

/// N + N(N-1) 2^(N-2): extensions enumerated when growing a tie-free instance
/// to full length.
std::uint64_t generation_work_bound(int n);

}  // namespace msr
