#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "msr/core.hpp"
#include "msr/pruning.hpp"
#include "msr/query.hpp"

namespace msr {

/// n! / (n - length)!: ordered length-`length` sequences over n points.
/// Throws out_of_domain on overflow or a length outside [0, n].
std::uint64_t sequence_count(int n, int length);

/// Calls fn(const Sequence&) for every length-`length` sequence over n
/// points in lexicographic order.
template <typename Fn>
void for_each_sequence(int n, int length, Fn&& fn) {
  std::array<PointId, kMaxPoints> buf{};
  auto rec = [&](auto&& self, int depth, Mask used) -> void {
    if (depth == length) {
      fn(Sequence(std::span<const PointId>(buf.data(), static_cast<std::size_t>(length))));
      return;
    }
    for (int i = 0; i < n; ++i) {
      const PointId p(i);
      if (used & p.bit()) continue;
      buf[depth] = p;
      self(self, depth + 1, used | p.bit());
    }
  };
  rec(rec, 0, 0);
}

/// All length-`length` sequences, lexicographic. Throws invalid_argument
/// unless 1 <= length <= n.
std::vector<Sequence> enumerate_sequences(const Instance& inst, int length);

inline constexpr std::uint64_t kBruteForceLimit = 100'000'000;

/// Exact minimum over every route with length in [l_min, l_max] (optionally
/// ending at `destination`), evaluated with ptd_direct. Returns all exact
/// ties, shortest first, lexicographic within a length. Throws too_large when
/// more than kBruteForceLimit sequences would be evaluated.
RouteSet brute_force(const Instance& inst, const Origin& origin, int l_min, int l_max,
                     std::optional<PointId> destination = {});

/// [D(c1,c2), 1-P(c2), D(c2,c3), 1-P(c3), ...]; throws invalid_argument for a
/// single point.
std::vector<double> dp_vector(const Sequence& seq, const Instance& inst);

/// Componentwise dominance: every entry <=, at least one <.
bool dp_dominates(std::span<const double> a, std::span<const double> b);

struct LcpResult {
  std::vector<Sequence> survivors;
  PruneStats stats;
};

/// Route-dominance pruning among sequences sharing source and destination.
/// Equal DP vectors are both kept. Survivors come back in lexicographic
/// order. Throws invalid_argument on mixed lengths.
LcpResult lcp_prune(std::span<const Sequence> seqs, const Instance& inst);

/// lcp_prune over every length-`length` sequence, one (source, destination)
/// group at a time so the whole level is never held in memory. Survivors are
/// only collected when `keep_survivors` is set.
LcpResult lcp_prune_level(const Instance& inst, int length, bool keep_survivors = true);

}  // namespace msr
