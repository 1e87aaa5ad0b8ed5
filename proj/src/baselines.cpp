#include "msr/baselines.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace msr {

std::uint64_t sequence_count(int n, int length) {
  if (length < 0 || length > n) {
    throw Error(ErrorKind::out_of_domain, "length " + std::to_string(length) + " outside [0, " + std::to_string(n) + "]");
  }
  std::uint64_t count = 1;
  for (int k = n - length + 1; k <= n; ++k) {
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(k), &count)) {
      throw Error(ErrorKind::out_of_domain, "sequence count overflows 64 bits");
    }
  }
  return count;
}

std::vector<Sequence> enumerate_sequences(const Instance& inst, int length) {
  const int n = inst.size();
  if (length < 1 || length > n) {
    throw Error(ErrorKind::invalid_argument, "length must be in [1, " + std::to_string(n) + "]");
  }
  std::vector<Sequence> out;
  out.reserve(sequence_count(n, length));
  for_each_sequence(n, length, [&](const Sequence& s) { out.push_back(s); });
  return out;
}

RouteSet brute_force(const Instance& inst, const Origin& origin, int l_min, int l_max,
                     std::optional<PointId> destination) {
  const int n = inst.size();
  if (l_min < 1 || l_min > l_max || l_max > n) {
    throw Error(ErrorKind::invalid_argument, "length range outside [1, " + std::to_string(n) + "]");
  }
  if (destination && destination->index() >= n) {
    throw Error(ErrorKind::invalid_argument, "destination not in instance");
  }
  std::uint64_t total = 0;
  for (int length = l_min; length <= l_max; ++length) {
    std::uint64_t count = 0;
    try {
      count = sequence_count(n, length);
    } catch (const Error&) {
      count = std::numeric_limits<std::uint64_t>::max();
    }
    if (count > kBruteForceLimit || total + count > kBruteForceLimit) {
      throw Error(ErrorKind::too_large, "exhaustive search over n = " + std::to_string(n) + " exceeds " +
                                            std::to_string(kBruteForceLimit) + " sequences");
    }
    total += count;
  }
  (void)origin.costs(inst);  // validates the origin once

  RouteSet out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Sequence> ties;
  for (int length = l_min; length <= l_max; ++length) {
    for_each_sequence(n, length, [&](const Sequence& s) {
      if (destination && s.destination() != *destination) return;
      ++out.evaluated;
      const double f = ptd_direct(origin, s, inst);
      if (f < best) {
        best = f;
        ties.clear();
        ties.push_back(s);
      } else if (f == best) {
        ties.push_back(s);
      }
    });
  }
  if (ties.empty()) throw Error(ErrorKind::empty_result, "no sequence matches the query");
  out.cost = best;
  for (const Sequence& s : ties) {
    out.routes.push_back(Route{origin, Candidate{s, f1_direct(s, inst), pe_closed(s, inst)}, best});
  }
  return out;
}

std::vector<double> dp_vector(const Sequence& seq, const Instance& inst) {
  if (seq.size() < 2) throw Error(ErrorKind::invalid_argument, "DP vector needs at least two points");
  std::vector<double> v;
  v.reserve(2 * (seq.size() - 1));
  for (int k = 1; k < seq.size(); ++k) {
    v.push_back(inst.cost(seq[k - 1], seq[k]));
    v.push_back(1.0 - inst.prob(seq[k]));
  }
  return v;
}

bool dp_dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::invalid_argument, "DP vectors differ in length");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

namespace {

// Prefix tree over the sequences of one (source, destination) group.
struct Trie {
  struct Node {
    std::vector<std::pair<PointId, int>> children;
  };
  std::vector<Node> nodes{Node{}};

  void insert(const Sequence& s) {
    int at = 0;
    for (int k = 1; k < s.size(); ++k) {
      auto& kids = nodes[at].children;
      auto it = std::find_if(kids.begin(), kids.end(), [&](const auto& c) { return c.first == s[k]; });
      if (it != kids.end()) {
        at = it->second;
      } else {
        const int next = static_cast<int>(nodes.size());
        kids.emplace_back(s[k], next);
        nodes.emplace_back();
        at = next;
      }
    }
  }
};

struct Search {
  const Trie& trie;
  const Sequence& b;
  const Instance& inst;
  std::span<const PointId> by_prob;  // points, most probable first
  std::vector<double> b_tail;        // b_tail[k]: probability mass of b's intermediates from k on
};

// Largest probability mass `count` unused intermediate points can carry.
double best_tail(const Search& s, Mask used, int count) {
  double total = 0.0;
  for (PointId p : s.by_prob) {
    if (count == 0) break;
    if ((used & p.bit()) || p == s.b.destination()) continue;
    total += s.inst.prob(p);
    --count;
  }
  return total;
}

// Searches for a stored sequence whose DP vector dominates that of `b`. Only
// branches that stay componentwise <= are explored, and a branch is dropped
// once its remaining points cannot match b's remaining probability mass.
bool dominated_in(const Search& s, int node, int depth, PointId prev, Mask used, bool strict) {
  const Sequence& b = s.b;
  if (depth == b.size()) return strict;
  if (depth < b.size() - 1 && best_tail(s, used, b.size() - 1 - depth) < s.b_tail[depth] - 1e-9) return false;
  const double db = s.inst.cost(b[depth - 1], b[depth]);
  const double qb = 1.0 - s.inst.prob(b[depth]);
  for (const auto& [p, child] : s.trie.nodes[node].children) {
    const double da = s.inst.cost(prev, p);
    const double qa = 1.0 - s.inst.prob(p);
    if (da > db || qa > qb) continue;
    if (dominated_in(s, child, depth + 1, p, used | p.bit(), strict || da < db || qa < qb)) return true;
  }
  return false;
}

}  // namespace

LcpResult lcp_prune(std::span<const Sequence> seqs, const Instance& inst) {
  LcpResult out;
  out.stats.enumerated = seqs.size();
  if (seqs.empty()) return out;
  const int length = seqs.front().size();
  for (const Sequence& s : seqs) {
    if (s.size() != length) throw Error(ErrorKind::invalid_argument, "LCP input mixes sequence lengths");
  }

  std::map<std::pair<int, int>, std::vector<const Sequence*>> groups;
  for (const Sequence& s : seqs) groups[{s.source().index(), s.destination().index()}].push_back(&s);

  // Dominance is a strict partial order, so a sequence dominated by anything
  // in its group is also dominated by a survivor; testing against the whole
  // group is equivalent to testing against survivors.
  std::vector<PointId> by_prob;
  for (int i = 0; i < inst.size(); ++i) by_prob.emplace_back(i);
  std::stable_sort(by_prob.begin(), by_prob.end(),
                   [&](PointId x, PointId y) { return inst.prob(x) > inst.prob(y); });

  for (const auto& [key, members] : groups) {
    Trie trie;
    for (const Sequence* s : members) trie.insert(*s);
    for (const Sequence* s : members) {
      Search search{trie, *s, inst, by_prob, std::vector<double>(length, 0.0)};
      for (int k = length - 2; k >= 1; --k) search.b_tail[k] = search.b_tail[k + 1] + inst.prob((*s)[k]);
      if (!dominated_in(search, 0, 1, s->source(), s->source().bit(), false)) out.survivors.push_back(*s);
    }
  }
  std::sort(out.survivors.begin(), out.survivors.end());
  out.stats.kept = out.survivors.size();
  return out;
}

LcpResult lcp_prune_level(const Instance& inst, int length, bool keep_survivors) {
  const int n = inst.size();
  if (length < 1 || length > n) {
    throw Error(ErrorKind::invalid_argument, "length must be in [1, " + std::to_string(n) + "]");
  }
  LcpResult out;
  std::vector<Sequence> group;
  std::array<PointId, kMaxPoints> buf{};
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if ((length == 1) != (s == d)) continue;
      group.clear();
      buf[0] = PointId(s);
      buf[length - 1] = PointId(d);
      auto rec = [&](auto&& self, int depth, Mask used) -> void {
        if (depth >= length - 1) {
          group.emplace_back(std::span<const PointId>(buf.data(), static_cast<std::size_t>(length)));
          return;
        }
        for (int i = 0; i < n; ++i) {
          const PointId p(i);
          if (used & p.bit()) continue;
          buf[depth] = p;
          self(self, depth + 1, used | p.bit());
        }
      };
      rec(rec, 1, PointId(s).bit() | PointId(d).bit());

      auto part = lcp_prune(group, inst);
      out.stats.enumerated += part.stats.enumerated;
      out.stats.kept += part.stats.kept;
      if (keep_survivors) out.survivors.insert(out.survivors.end(), part.survivors.begin(), part.survivors.end());
    }
  }
  std::sort(out.survivors.begin(), out.survivors.end());
  return out;
}

}  // namespace msr
