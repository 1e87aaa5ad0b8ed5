#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "msr/core.hpp"
#include "msr/growth.hpp"

namespace msr {

struct Query {
  Origin origin;
  int l_min = 1;
  int l_max = 1;
  std::optional<PointId> destination;
};

/// All routes sharing the minimum cost, in scan order (length, then store
/// order).
struct RouteSet {
  std::vector<Route> routes;
  double cost = 0.0;
  /// Candidates evaluated while answering.
  std::size_t evaluated = 0;
};

/// Scans levels [l_min, l_max] of the store and returns every minimum-cost
/// route. `tie_tol` is a relative tolerance for collecting ties (0 = exact).
///
/// Errors: mismatch (store grown from another instance), missing_level,
/// invalid_argument (bad lengths or destination), horizon_violation (origin
/// cost not below the horizon), empty_result.
RouteSet route_online(const CandidateStore& store, const Instance& inst, const Query& q, double tie_tol = 0.0);

/// route_online restricted to routes ending at q.destination. The store must
/// have been grown with destination-keyed pruning: an unconstrained store may
/// have pruned the best ordering that ends at the destination.
RouteSet route_online_dest(const CandidateStore& store, const Instance& inst, const Query& q,
                           double tie_tol = 0.0);

/// Round-robin recommendation across source points for many cabs at once.
/// Request k (1-based) is served from the ((k-1) mod S)-th surviving source,
/// S being the number of sources with a candidate in the length range; the
/// route returned is that source's best for the requesting origin.
///
/// The store and instance must outlive the dispatcher. dispatch() may be
/// called concurrently.
class Dispatcher {
 public:
  Dispatcher(const CandidateStore& store, const Instance& inst);

  Route dispatch(const Origin& request, int l_min, int l_max);

  /// Sources served, in rotation order, for a length range.
  std::vector<PointId> rotation(int l_min, int l_max);
  std::uint64_t requests_served() const { return counter_.load(); }

 private:
  struct Table {
    std::vector<PointId> sources;
    std::vector<std::vector<const Candidate*>> candidates;  // parallel to sources
  };

  const Table& table_for(int l_min, int l_max);

  const CandidateStore* store_;
  const Instance* inst_;
  std::mutex mu_;
  std::map<std::pair<int, int>, Table> tables_;
  std::atomic<std::uint64_t> counter_{0};
};

inline Route round_robin(Dispatcher& dispatcher, const Origin& request, int l_min, int l_max) {
  return dispatcher.dispatch(request, l_min, l_max);
}

}  // namespace msr
