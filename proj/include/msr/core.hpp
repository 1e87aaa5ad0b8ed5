#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include "msr/error.hpp"

namespace msr {

/// Set of pick-up points, one bit per point.
using Mask = std::uint64_t;

inline constexpr int kMaxPoints = 64;

/// Dense index of a pick-up point in [0, n).
struct PointId {
  std::uint8_t value = 0;

  constexpr PointId() = default;
  constexpr explicit PointId(int v) : value(static_cast<std::uint8_t>(v)) {}

  constexpr int index() const { return value; }
  constexpr Mask bit() const { return Mask{1} << value; }

  friend constexpr auto operator<=>(PointId, PointId) = default;
};

enum class MetricKind { distance, time };

/// Whether construction enforces horizon > (n+1) * max cost, which keeps the
/// horizon above the travelled cost of every prefix of every route from a
/// point origin. `unchecked` admits hand-made examples with a small horizon;
/// queries still require every origin cost to stay below the horizon, which
/// is what batch pruning relies on.
enum class HorizonPolicy { enforce, unchecked };

struct Coord {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Pick-up points, their success probabilities, the directed cost matrix and
/// the horizon cost charged when a whole route fails. Immutable.
class Instance {
 public:
  Instance(std::vector<double> probs, std::vector<double> costs, double horizon,
           MetricKind metric = MetricKind::distance,
           HorizonPolicy policy = HorizonPolicy::enforce);

  /// Costs are Euclidean distances between the coordinates.
  static Instance from_coordinates(std::vector<double> probs, std::vector<Coord> coords,
                                   double horizon, MetricKind metric = MetricKind::distance,
                                   HorizonPolicy policy = HorizonPolicy::enforce);

  int size() const { return n_; }
  double prob(PointId p) const { return probs_[p.value]; }
  std::span<const double> probs() const { return probs_; }
  double cost(PointId from, PointId to) const { return costs_[from.value * n_ + to.value]; }
  std::span<const double> costs() const { return costs_; }
  double horizon() const { return horizon_; }
  MetricKind metric() const { return metric_; }
  HorizonPolicy horizon_policy() const { return policy_; }
  double max_cost() const { return max_cost_; }

  bool horizon_bound_holds() const;

  bool has_coordinates() const { return !coords_.empty(); }
  std::span<const Coord> coordinates() const { return coords_; }
  /// True when the matrix was derived from coordinates.
  bool euclidean() const { return euclidean_; }
  std::vector<double> euclidean_costs_from(Coord where) const;

  /// Content hash of probabilities, matrix, horizon and metric (FNV-1a).
  std::uint64_t fingerprint() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int n_ = 0;
  std::vector<double> probs_;
  std::vector<double> costs_;
  double horizon_ = 0.0;
  MetricKind metric_ = MetricKind::distance;
  HorizonPolicy policy_ = HorizonPolicy::enforce;
  double max_cost_ = 0.0;
  std::vector<Coord> coords_;
  bool euclidean_ = false;
};

/// Ordered list of distinct points, stored inline.
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::span<const PointId> points);
  Sequence(std::initializer_list<int> points);

  int size() const { return size_; }
  Mask mask() const { return mask_; }
  PointId operator[](int i) const { return points_[i]; }
  PointId source() const { return points_[0]; }
  PointId destination() const { return points_[size_ - 1]; }
  std::span<const PointId> points() const { return {points_.data(), size_}; }
  bool contains(PointId p) const { return (mask_ & p.bit()) != 0; }

  /// Copy with `p` placed in front. Throws ErrorKind::membership if present.
  Sequence prepended(PointId p) const;

  friend bool operator==(const Sequence& a, const Sequence& b);
  friend std::strong_ordering operator<=>(const Sequence& a, const Sequence& b);

 private:
  std::array<PointId, kMaxPoints> points_{};
  std::uint8_t size_ = 0;
  Mask mask_ = 0;
};

/// A sequence with its cached origin-independent cost terms: `f1` is the
/// expected cost from the source onwards excluding the horizon term, `pe` is
/// the probability that some point along the sequence yields a pick-up.
struct Candidate {
  Sequence seq;
  double f1 = 0.0;
  double pe = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Position of the cab: either one of the pick-up points or an explicit
/// vector of costs to every pick-up point.
class Origin {
 public:
  static Origin at_point(PointId p) { return Origin(p); }
  static Origin with_costs(std::vector<double> costs) { return Origin(std::move(costs)); }

  bool is_point() const { return std::holds_alternative<PointId>(where_); }
  PointId point() const { return std::get<PointId>(where_); }

  /// Cost from the origin to every point, validated against `inst`
  /// (length n, entries >= 0 and below the horizon).
  std::vector<double> costs(const Instance& inst) const;
  double cost_to(PointId p, const Instance& inst) const;

  friend bool operator==(const Origin&, const Origin&) = default;

 private:
  explicit Origin(PointId p) : where_(p) {}
  explicit Origin(std::vector<double> costs) : where_(std::move(costs)) {}

  std::variant<PointId, std::vector<double>> where_;
};

struct Route {
  Origin origin;
  Candidate candidate;
  double cost = 0.0;
};

/// 1 - prod(1 - p_i). Throws on an empty list.
double pe_closed(std::span<const double> probs);
double pe_closed(const Sequence& seq, const Instance& inst);

Candidate seed_candidate(PointId c, const Instance& inst);

/// Backward growth step: prepends `c_new` and updates f1/pe from the cached
/// values of `r` alone.
Candidate extend_candidate(PointId c_new, const Candidate& r, const Instance& inst);

/// f1 as an explicit dot product of cumulative costs and stop probabilities.
double f1_direct(const Sequence& seq, const Instance& inst);

/// Expected cost of the route origin -> seq, built from the full
/// (L+1)-dimensional cost and probability vectors. Independent of the cached
/// candidate arithmetic.
double ptd_direct(const Origin& origin, const Sequence& seq, const Instance& inst);

/// Route cost from cached candidate values. The hot loop of the query engine
/// uses the same expression through route_cost_from().
double route_cost(const Origin& origin, const Candidate& r, const Instance& inst);

inline double route_cost_from(double origin_cost, double source_prob, double f1, double pe,
                              double horizon) {
  return (1.0 - source_prob) * f1 + origin_cost * pe + horizon * (1.0 - pe);
}

Route make_route(const Origin& origin, const Candidate& r, const Instance& inst);

/// Potential travel time: the same cost model on a time-valued instance.
double ptt_cost(const Origin& origin, const Sequence& seq, const Instance& inst);

/// Potential travel and waiting time: cruising cost, plus waiting `t_wait` at
/// the last point with success probability p_wait[last], plus the horizon
/// charged only when waiting fails too.
double ptw_cost(const Origin& origin, const Sequence& seq, const Instance& inst, double t_wait,
                std::span<const double> p_wait);

/// |a - b| <= tol * max(|a|, |b|); tol = 0 means exact equality.
bool approx_equal(double a, double b, double tol);

}  // namespace msr
