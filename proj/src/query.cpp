#include "msr/query.hpp"

#include <limits>
#include <string>

namespace msr {

namespace {

void check_lengths(const Query& q, const Instance& inst) {
  if (q.l_min < 1 || q.l_min > q.l_max || q.l_max > inst.size()) {
    throw Error(ErrorKind::invalid_argument, "length range [" + std::to_string(q.l_min) + ", " +
                                                 std::to_string(q.l_max) + "] not within [1, " +
                                                 std::to_string(inst.size()) + "]");
  }
}

RouteSet scan(const CandidateStore& store, const Instance& inst, const Query& q, double tie_tol) {
  store.check_instance(inst);
  check_lengths(q, inst);
  if (tie_tol < 0.0) throw Error(ErrorKind::invalid_argument, "tie tolerance must be >= 0");
  if (q.destination) {
    if (q.destination->index() >= inst.size()) {
      throw Error(ErrorKind::invalid_argument,
                  "destination " + std::to_string(q.destination->index()) + " not in instance");
    }
    if (store.destination() && *store.destination() != *q.destination) {
      throw Error(ErrorKind::invalid_argument, "store was grown for destination " +
                                                   std::to_string(store.destination()->index()));
    }
  }
  const std::vector<double> d0 = q.origin.costs(inst);
  const double horizon = inst.horizon();
  const auto probs = inst.probs();

  // Levels are checked up front so a missing one fails before any work.
  for (int length = q.l_min; length <= q.l_max; ++length) (void)store.level(length);

  RouteSet out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<const Candidate*> ties;
  for (int length = q.l_min; length <= q.l_max; ++length) {
    for (const Candidate& r : store.level(length)) {
      if (q.destination && r.seq.destination() != *q.destination) continue;
      ++out.evaluated;
      const int s = r.seq.source().index();
      const double f = route_cost_from(d0[s], probs[s], r.f1, r.pe, horizon);
      if (f < best && !approx_equal(f, best, tie_tol)) {
        // A strictly better route drops ties that are no longer within the
        // tolerance of the new minimum.
        best = f;
        std::erase_if(ties, [&](const Candidate* c) {
          const int cs = c->seq.source().index();
          return !approx_equal(route_cost_from(d0[cs], probs[cs], c->f1, c->pe, horizon), best, tie_tol);
        });
        ties.push_back(&r);
      } else if (approx_equal(f, best, tie_tol)) {
        if (f < best) best = f;
        ties.push_back(&r);
      }
    }
  }
  if (ties.empty()) {
    throw Error(ErrorKind::empty_result, q.destination ? "no candidate ends at destination " +
                                                             std::to_string(q.destination->index())
                                                       : std::string("no candidate in length range"));
  }
  std::erase_if(ties, [&](const Candidate* c) {
    const int cs = c->seq.source().index();
    return !approx_equal(route_cost_from(d0[cs], probs[cs], c->f1, c->pe, horizon), best, tie_tol);
  });
  out.cost = best;
  out.routes.reserve(ties.size());
  for (const Candidate* c : ties) {
    const int s = c->seq.source().index();
    out.routes.push_back(Route{q.origin, *c, route_cost_from(d0[s], probs[s], c->f1, c->pe, horizon)});
  }
  return out;
}

}  // namespace

RouteSet route_online(const CandidateStore& store, const Instance& inst, const Query& q, double tie_tol) {
  if (q.destination && !store.keyed_by_destination()) {
    throw Error(ErrorKind::invalid_argument,
                "destination queries need a store grown with destination-keyed pruning");
  }
  return scan(store, inst, q, tie_tol);
}

RouteSet route_online_dest(const CandidateStore& store, const Instance& inst, const Query& q, double tie_tol) {
  if (!q.destination) throw Error(ErrorKind::invalid_argument, "query has no destination");
  return route_online(store, inst, q, tie_tol);
}

// ---------------------------------------------------------------------------
// Dispatcher

Dispatcher::Dispatcher(const CandidateStore& store, const Instance& inst) : store_(&store), inst_(&inst) {
  store.check_instance(inst);
}

const Dispatcher::Table& Dispatcher::table_for(int l_min, int l_max) {
  check_lengths(Query{Origin::at_point(PointId(0)), l_min, l_max, {}}, *inst_);
  std::lock_guard lock(mu_);
  auto [it, inserted] = tables_.try_emplace({l_min, l_max});
  if (!inserted) return it->second;

  Table& table = it->second;
  std::vector<std::vector<const Candidate*>> by_source(inst_->size());
  for (int length = l_min; length <= l_max; ++length) {
    for (const Candidate& r : store_->level(length)) by_source[r.seq.source().index()].push_back(&r);
  }
  for (int i = 0; i < inst_->size(); ++i) {
    if (by_source[i].empty()) continue;
    table.sources.emplace_back(i);
    table.candidates.push_back(std::move(by_source[i]));
  }
  return table;
}

std::vector<PointId> Dispatcher::rotation(int l_min, int l_max) { return table_for(l_min, l_max).sources; }

Route Dispatcher::dispatch(const Origin& request, int l_min, int l_max) {
  const Table& table = table_for(l_min, l_max);
  if (table.sources.empty()) throw Error(ErrorKind::empty_result, "no source has a candidate in length range");
  const std::vector<double> d0 = request.costs(*inst_);

  const std::uint64_t k = counter_.fetch_add(1);
  const std::size_t slot = k % table.sources.size();
  const PointId s = table.sources[slot];
  const double ps = inst_->prob(s);
  const double horizon = inst_->horizon();

  const Candidate* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const Candidate* r : table.candidates[slot]) {
    const double f = route_cost_from(d0[s.index()], ps, r->f1, r->pe, horizon);
    if (f < best_cost) {
      best_cost = f;
      best = r;
    }
  }
  return Route{request, *best, best_cost};
}

}  // namespace msr
