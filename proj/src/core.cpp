#include "msr/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace msr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::membership: return "membership";
    case ErrorKind::horizon_violation: return "horizon_violation";
    case ErrorKind::out_of_domain: return "out_of_domain";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::mismatch: return "mismatch";
    case ErrorKind::missing_level: return "missing_level";
    case ErrorKind::empty_result: return "empty_result";
    case ErrorKind::too_large: return "too_large";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invariant, what + " must lie in [0,1], got " + std::to_string(p));
}

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ull;

  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

}  // namespace

bool approx_equal(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::vector<double> probs, std::vector<double> costs, double horizon,
                   MetricKind metric, HorizonPolicy policy)
    : n_(static_cast<int>(probs.size())),
      probs_(std::move(probs)),
      costs_(std::move(costs)),
      horizon_(horizon),
      metric_(metric),
      policy_(policy) {
  if (n_ < 1 || n_ > kMaxPoints) {
    fail(ErrorKind::invariant, "instance size must be in [1, 64], got " + std::to_string(n_));
  }
  if (costs_.size() != static_cast<std::size_t>(n_) * n_) {
    fail(ErrorKind::invariant, "cost matrix must hold n*n = " + std::to_string(n_ * n_) +
                                   " entries, got " + std::to_string(costs_.size()));
  }
  for (int i = 0; i < n_; ++i) check_probability(probs_[i], "probability of point " + std::to_string(i));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double c = costs_[i * n_ + j];
      if (!(c >= 0.0) || !std::isfinite(c)) {
        fail(ErrorKind::invariant, "cost[" + std::to_string(i) + "][" + std::to_string(j) +
                                       "] must be finite and non-negative");
      }
      if (i == j && c != 0.0) {
        fail(ErrorKind::invariant, "cost[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");
      }
      max_cost_ = std::max(max_cost_, c);
    }
  }
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    fail(ErrorKind::invariant, "horizon must be positive and finite");
  }
  if (policy_ == HorizonPolicy::enforce && !horizon_bound_holds()) {
    fail(ErrorKind::invariant, "horizon " + std::to_string(horizon_) + " must exceed (n+1) * max cost = " +
                                   std::to_string((n_ + 1) * max_cost_));
  }
}

Instance Instance::from_coordinates(std::vector<double> probs, std::vector<Coord> coords,
                                    double horizon, MetricKind metric, HorizonPolicy policy) {
  const std::size_t n = coords.size();
  if (probs.size() != n) {
    fail(ErrorKind::invariant, "coordinate count " + std::to_string(n) +
                                   " differs from probability count " + std::to_string(probs.size()));
  }
  std::vector<double> costs(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) costs[i * n + j] = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
    }
  }
  Instance inst(std::move(probs), std::move(costs), horizon, metric, policy);
  inst.coords_ = std::move(coords);
  inst.euclidean_ = true;
  return inst;
}

bool Instance::horizon_bound_holds() const { return horizon_ > (n_ + 1) * max_cost_; }

std::vector<double> Instance::euclidean_costs_from(Coord where) const {
  if (!has_coordinates()) fail(ErrorKind::invalid_argument, "instance has no coordinates");
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = std::hypot(where.x - coords_[i].x, where.y - coords_[i].y);
  return out;
}

std::uint64_t Instance::fingerprint() const {
  Fnv1a h;
  h.u64(static_cast<std::uint64_t>(n_));
  h.u64(metric_ == MetricKind::distance ? 0 : 1);
  h.f64(horizon_);
  for (double p : probs_) h.f64(p);
  for (double c : costs_) h.f64(c);
  return h.h;
}

// ---------------------------------------------------------------------------
// Sequence

Sequence::Sequence(std::span<const PointId> points) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "sequence must hold at least one point");
  if (points.size() > kMaxPoints) fail(ErrorKind::invalid_argument, "sequence longer than 64 points");
  for (PointId p : points) {
    if (p.value >= kMaxPoints) fail(ErrorKind::invalid_argument, "point id out of range");
    if (mask_ & p.bit()) {
      fail(ErrorKind::membership, "point " + std::to_string(p.value) + " repeated in sequence");
    }
    mask_ |= p.bit();
    points_[size_++] = p;
  }
}

Sequence::Sequence(std::initializer_list<int> points) {
  std::vector<PointId> ids;
  ids.reserve(points.size());
  for (int p : points) {
    if (p < 0 || p >= kMaxPoints) fail(ErrorKind::invalid_argument, "point id out of range");
    ids.emplace_back(p);
  }
  *this = Sequence(std::span<const PointId>(ids));
}

Sequence Sequence::prepended(PointId p) const {
  if (contains(p)) fail(ErrorKind::membership, "point " + std::to_string(p.value) + " already in sequence");
  if (size_ >= kMaxPoints) fail(ErrorKind::invalid_argument, "sequence longer than 64 points");
  Sequence out;
  out.points_[0] = p;
  std::copy_n(points_.begin(), size_, out.points_.begin() + 1);
  out.size_ = static_cast<std::uint8_t>(size_ + 1);
  out.mask_ = mask_ | p.bit();
  return out;
}

bool operator==(const Sequence& a, const Sequence& b) {
  return a.size_ == b.size_ && a.mask_ == b.mask_ && std::equal(a.points_.begin(), a.points_.begin() + a.size_, b.points_.begin());
}

std::strong_ordering operator<=>(const Sequence& a, const Sequence& b) {
  const auto pa = a.points();
  const auto pb = b.points();
  return std::lexicographical_compare_three_way(pa.begin(), pa.end(), pb.begin(), pb.end());
}

// ---------------------------------------------------------------------------
// Origin

std::vector<double> Origin::costs(const Instance& inst) const {
  const int n = inst.size();
  if (is_point()) {
    const PointId p = point();
    if (p.index() >= n) fail(ErrorKind::invalid_argument, "origin point " + std::to_string(p.index()) + " not in instance");
    auto row = inst.costs().subspan(static_cast<std::size_t>(p.index()) * n, n);
    return {row.begin(), row.end()};
  }
  const auto& v = std::get<std::vector<double>>(where_);
  if (static_cast<int>(v.size()) != n) {
    fail(ErrorKind::invalid_argument, "origin cost vector has " + std::to_string(v.size()) +
                                          " entries, instance has " + std::to_string(n) + " points");
  }
  for (int i = 0; i < n; ++i) {
    if (!(v[i] >= 0.0)) fail(ErrorKind::invalid_argument, "origin cost to point " + std::to_string(i) + " is negative");
    if (!(v[i] < inst.horizon())) {
      fail(ErrorKind::horizon_violation, "origin cost to point " + std::to_string(i) + " reaches the horizon");
    }
  }
  return v;
}

double Origin::cost_to(PointId p, const Instance& inst) const {
  if (p.index() >= inst.size()) fail(ErrorKind::invalid_argument, "point not in instance");
  if (is_point()) {
    if (point().index() >= inst.size()) fail(ErrorKind::invalid_argument, "origin point not in instance");
    return inst.cost(point(), p);
  }
  const auto& v = std::get<std::vector<double>>(where_);
  if (static_cast<int>(v.size()) != inst.size()) {
    fail(ErrorKind::invalid_argument, "origin cost vector length differs from instance size");
  }
  return v[p.index()];
}

// ---------------------------------------------------------------------------
// Cost arithmetic

double pe_closed(std::span<const double> probs) {
  if (probs.empty()) fail(ErrorKind::out_of_domain, "pe of an empty sequence is undefined");
  double miss = 1.0;
  for (double p : probs) {
    check_probability(p, "probability");
    miss *= 1.0 - p;
  }
  return 1.0 - miss;
}

double pe_closed(const Sequence& seq, const Instance& inst) {
  std::vector<double> probs;
  probs.reserve(seq.size());
  for (PointId p : seq.points()) probs.push_back(inst.prob(p));
  return pe_closed(probs);
}

Candidate seed_candidate(PointId c, const Instance& inst) {
  if (c.index() >= inst.size()) fail(ErrorKind::invalid_argument, "point " + std::to_string(c.index()) + " not in instance");
  return Candidate{Sequence(std::span<const PointId>(&c, 1)), 0.0, inst.prob(c)};
}

Candidate extend_candidate(PointId c_new, const Candidate& r, const Instance& inst) {
  if (c_new.index() >= inst.size()) fail(ErrorKind::invalid_argument, "point not in instance");
  const PointId s = r.seq.source();
  Candidate out;
  out.seq = r.seq.prepended(c_new);
  out.f1 = (1.0 - inst.prob(s)) * r.f1 + inst.cost(c_new, s) * r.pe;
  const double p = inst.prob(c_new);
  out.pe = p + (1.0 - p) * r.pe;
  return out;
}

double f1_direct(const Sequence& seq, const Instance& inst) {
  const int len = seq.size();
  double total = 0.0;
  double travelled = 0.0;
  double reach = 1.0;  // probability of arriving at point k without a pick-up since the source
  for (int k = 1; k < len; ++k) {
    travelled += inst.cost(seq[k - 1], seq[k]);
    total += travelled * reach * inst.prob(seq[k]);
    reach *= 1.0 - inst.prob(seq[k]);
  }
  return total;
}

double ptd_direct(const Origin& origin, const Sequence& seq, const Instance& inst) {
  const int len = seq.size();
  if (len < 1) fail(ErrorKind::invalid_argument, "empty sequence");
  std::array<double, kMaxPoints + 1> dist{};
  std::array<double, kMaxPoints + 1> prob{};
  double travelled = origin.cost_to(seq[0], inst);
  double miss = 1.0;
  for (int k = 0; k < len; ++k) {
    if (k > 0) travelled += inst.cost(seq[k - 1], seq[k]);
    dist[k] = travelled;
    prob[k] = miss * inst.prob(seq[k]);
    miss *= 1.0 - inst.prob(seq[k]);
  }
  dist[len] = inst.horizon();
  prob[len] = miss;

  double mass = 0.0;
  double cost = 0.0;
  for (int k = 0; k <= len; ++k) {
    mass += prob[k];
    cost += dist[k] * prob[k];
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    fail(ErrorKind::invariant, "route probability vector sums to " + std::to_string(mass));
  }
  return cost;
}

double route_cost(const Origin& origin, const Candidate& r, const Instance& inst) {
  const PointId s = r.seq.source();
  const double d0 = origin.cost_to(s, inst);
  if (!(d0 < inst.horizon())) {
    fail(ErrorKind::horizon_violation, "origin cost to source " + std::to_string(s.index()) + " reaches the horizon");
  }
  return route_cost_from(d0, inst.prob(s), r.f1, r.pe, inst.horizon());
}

Route make_route(const Origin& origin, const Candidate& r, const Instance& inst) {
  return Route{origin, r, route_cost(origin, r, inst)};
}

double ptt_cost(const Origin& origin, const Sequence& seq, const Instance& inst) {
  if (inst.metric() != MetricKind::time) fail(ErrorKind::invalid_argument, "travel-time cost needs a time-valued instance");
  return ptd_direct(origin, seq, inst);
}

double ptw_cost(const Origin& origin, const Sequence& seq, const Instance& inst, double t_wait,
                std::span<const double> p_wait) {
  if (inst.metric() != MetricKind::time) fail(ErrorKind::invalid_argument, "waiting-time cost needs a time-valued instance");
  if (static_cast<int>(p_wait.size()) != inst.size()) {
    fail(ErrorKind::invalid_argument, "waiting probabilities must cover every point");
  }
  if (!(t_wait >= 0.0)) fail(ErrorKind::invalid_argument, "waiting time must be non-negative");
  const int len = seq.size();
  const double pw = p_wait[seq.destination().index()];
  check_probability(pw, "waiting probability");

  double cruising = 0.0;
  double elapsed = 0.0;
  double miss = 1.0;
  for (int k = 0; k < len; ++k) {
    elapsed += k == 0 ? origin.cost_to(seq[0], inst) : inst.cost(seq[k - 1], seq[k]);
    cruising += elapsed * miss * inst.prob(seq[k]);
    miss *= 1.0 - inst.prob(seq[k]);
  }
  const double waiting = (elapsed + t_wait) * miss * pw;
  const double beyond = inst.horizon() * miss * (1.0 - pw);
  return cruising + waiting + beyond;
}

}  // namespace msr
