#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "msr/core.hpp"

namespace msr {

enum class Precedence { first_precedes, second_precedes, equivalent, incomparable };

/// Pareto comparison on (f1, 1 - pe). Only meaningful for candidates that
/// share source and length; the caller enforces that.
Precedence iterative_precedence(const Candidate& a, const Candidate& b, double tol = 0.0);

struct PruneStats {
  std::size_t enumerated = 0;
  std::size_t kept = 0;

  double ratio() const {
    return enumerated == 0 ? 0.0 : static_cast<double>(enumerated - kept) / static_cast<double>(enumerated);
  }
};

enum class InsertOutcome { kept_new, kept_tie, discarded };

struct InsertResult {
  InsertOutcome outcome = InsertOutcome::discarded;
  std::vector<Candidate> evicted;
};

/// Buckets of same-length candidates keyed by (source, point set), or by
/// (source, destination, point set) for destination-constrained growth.
/// Every bucket holds only candidates whose f1 ties the bucket minimum.
class LevelIndex {
 public:
  explicit LevelIndex(bool keyed_by_destination = false, double tol = 0.0)
      : by_destination_(keyed_by_destination), tol_(tol) {}

  InsertResult insert(const Candidate& p);

  std::size_t bucket_count() const { return buckets_.size(); }
  std::size_t candidate_count() const { return live_; }

  /// Every candidate, sorted by (source, point set, point order).
  std::vector<Candidate> drain();
  std::vector<Candidate> snapshot() const;

  /// Checks the bucket invariant; used by tests.
  bool invariant_holds() const;

 private:
  struct Key {
    std::uint64_t mask;
    std::uint16_t source_dest;  // source | destination << 8, destination only when keyed by it
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.mask * 0x9E3779B97F4A7C15ull;
      h ^= (static_cast<std::uint64_t>(k.source_dest) + 0x632BE59BD9B4E019ull) + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  Key key_of(const Candidate& c) const;

  bool by_destination_;
  double tol_;
  std::size_t live_ = 0;
  std::unordered_map<Key, std::vector<Candidate>, KeyHash> buckets_;
};

/// Which candidates are compared with each other by batch_prune.
enum class BatchGroup { source, source_and_destination };

struct BatchResult {
  std::vector<Candidate> survivors;
  PruneStats stats;
};

/// Keeps, per source (or source and destination), the Pareto front of
/// (f1, 1 - pe); equivalent candidates are all kept. Output is sorted by
/// source, f1, mask and point order.
BatchResult batch_prune(std::span<const Candidate> level, double tol = 0.0,
                        BatchGroup group = BatchGroup::source);

/// 1 - 1/(L-1)!, the incremental pruning ratio on tie-free instances.
double ip_theoretical_ratio(int length);

/// Ordering used for emitted levels: source, mask, then point order.
bool canonical_less(const Candidate& a, const Candidate& b);

}  // namespace msr
