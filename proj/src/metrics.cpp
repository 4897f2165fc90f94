#include "lasnap/metrics.hpp"

#include <algorithm>
#include <map>

namespace lasnap {

CoveredRequired::CoveredRequired(std::uint64_t l, std::uint64_t r)
    : std::runtime_error("trace has a hole between events " + std::to_string(l) + " and " +
                         std::to_string(r)),
      left(l),
      right(r) {}

namespace {

// Latest delivery among messages sent at each event, or nullopt.
std::vector<std::optional<std::uint64_t>> last_delivery_by_sender(const ExecutionTrace& t) {
  std::vector<std::optional<std::uint64_t>> out(t.events.size());
  for (const auto& m : t.messages) {
    if (!m.delivered_at) continue;
    auto& slot = out[m.sent_at];
    if (!slot || *slot < *m.delivered_at) slot = m.delivered_at;
  }
  return out;
}

std::optional<std::uint64_t> oldest_source(const ExecutionTrace& t, const Event& e) {
  std::optional<std::uint64_t> best;
  for (auto id : e.recv) {
    const auto s = t.messages.at(id).sent_at;
    if (!best || s < *best) best = s;
  }
  return best;
}

// Non-timed rounds with events [0, start] in round 0, assigned until event
// `until` is reached (or the whole trace when until is nullopt).
RoundAssignment ntr_from(const ExecutionTrace& t, std::uint64_t start,
                         std::optional<std::uint64_t> until) {
  RoundAssignment ra;
  const auto count = t.events.size();
  if (count == 0) return ra;
  if (start >= count) throw std::out_of_range("event id out of range");
  const auto last_event = count - 1;
  const auto limit = until ? std::min(*until, last_event) : last_event;
  ra.rounds.assign(count, 0);
  ra.boundary.push_back(start);
  const auto reach = last_delivery_by_sender(t);

  std::uint64_t lo = 0;
  std::uint64_t prev = start;
  while (prev < limit) {
    std::optional<std::uint64_t> last;
    for (auto e = lo; e <= prev; ++e) {
      if (reach[e] && (!last || *reach[e] > *last)) last = reach[e];
    }
    if (!last || *last <= prev) throw CoveredRequired(prev, prev + 1);
    const auto r = ra.boundary.size();
    for (auto e = prev + 1; e <= *last; ++e) ra.rounds[e] = r;
    ra.boundary.push_back(*last);
    lo = prev + 1;
    prev = *last;
  }
  if (until) ra.rounds.resize(limit + 1);
  return ra;
}

struct Span {
  std::uint64_t lo, hi;
  Hop hop;
};

bool spans_cover(std::vector<Span> spans, std::uint64_t i, std::uint64_t j) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  auto reach = i;
  for (const auto& s : spans) {
    if (s.lo > reach) break;
    reach = std::max(reach, s.hi);
    if (reach >= j) return true;
  }
  return reach >= j;
}

// Classic interval-cover greedy: always extend to the farthest reach.
std::vector<Hop> interval_greedy(const std::vector<Span>& spans, std::uint64_t i, std::uint64_t j) {
  std::vector<Hop> out;
  auto reach = i;
  while (reach < j) {
    const Span* best = nullptr;
    for (const auto& s : spans) {
      if (s.lo <= reach && s.hi > reach && (!best || s.hi > best->hi)) best = &s;
    }
    if (!best) throw CoveredRequired(reach, reach + 1);
    out.push_back(best->hop);
    reach = best->hi;
  }
  return out;
}

// The constructive cover: for each round boundary e*_r, the hop from the
// earliest event whose message e*_r receives.
std::vector<Hop> boundary_cover(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j) {
  const auto ra = ntr_from(t, i, j);
  std::vector<Hop> out;
  for (std::size_t r = 1; r < ra.boundary.size(); ++r) {
    const auto star = ra.boundary[r];
    out.push_back(Hop{*oldest_source(t, t.events[star]), star});
  }
  return out;
}

HopCover cover(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j) {
  if (j >= t.events.size() || i > j) throw std::out_of_range("event ids out of range");
  HopCover hc;
  if (i == j) {
    hc.exhaustive = true;
    return hc;
  }
  // Clip every hop to [i, j]; keep only those not contained in another.
  std::vector<Span> spans;
  for (const auto& h : message_hops(t)) {
    if (h.to <= i || h.from >= j) continue;
    spans.push_back(Span{std::max(h.from, i), std::min(h.to, j), h});
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi > b.hi;
  });
  std::vector<Span> kept;
  for (const auto& s : spans) {
    if (!kept.empty() && kept.back().hi >= s.hi) continue;
    kept.push_back(s);
  }
  if (!spans_cover(kept, i, j)) {
    // Name the first uncovered cut.
    auto reach = i;
    for (const auto& s : kept) {
      if (s.lo > reach) break;
      reach = std::max(reach, s.hi);
    }
    throw CoveredRequired(reach, reach + 1);
  }

  if (kept.size() <= kExhaustiveHopLimit) {
    const auto c = kept.size();
    for (std::size_t k = 1; k <= c; ++k) {
      // Enumerate k-subsets with Gosper's hack.
      std::uint32_t mask = (1u << k) - 1;
      const std::uint32_t end = 1u << c;
      while (mask < end) {
        std::vector<Span> pick;
        for (std::size_t b = 0; b < c; ++b) {
          if (mask & (1u << b)) pick.push_back(kept[b]);
        }
        if (spans_cover(pick, i, j)) {
          hc.k = k;
          for (const auto& s : pick) hc.hops.push_back(s.hop);
          hc.exhaustive = true;
          return hc;
        }
        const std::uint32_t low = mask & -mask;
        const std::uint32_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
      }
    }
    throw std::logic_error("exhaustive hop cover found no cover of a covered interval");
  }

  auto constructive = boundary_cover(t, i, j);
  const auto audit = interval_greedy(kept, i, j);
  if (constructive.size() != audit.size()) {
    throw std::logic_error("hop cover audit failed: constructive " +
                           std::to_string(constructive.size()) + " vs interval greedy " +
                           std::to_string(audit.size()));
  }
  hc.k = constructive.size();
  hc.hops = std::move(constructive);
  return hc;
}

}  // namespace

RoundAssignment assign_ira(const ExecutionTrace& t) { return assign_ira_from(t, 0); }

RoundAssignment assign_ira_from(const ExecutionTrace& t, std::uint64_t start) {
  RoundAssignment ra;
  const auto count = t.events.size();
  if (count == 0) return ra;
  if (start >= count) throw std::out_of_range("event id out of range");
  ra.rounds.assign(count, 0);
  std::vector<std::optional<std::uint64_t>> star{start};
  std::uint64_t r = 0;
  for (auto i = start + 1; i < count; ++i) {
    const auto src = oldest_source(t, t.events[i]);
    if (!src) {
      ra.rounds[i] = r;
      continue;
    }
    const auto rp = ra.rounds[*src];
    auto from = *src;
    if (rp < star.size() && star[rp]) from = std::max(from, *star[rp]);
    for (auto k = from + 1; k <= i; ++k) ra.rounds[k] = rp + 1;
    if (star.size() <= rp + 1) star.resize(rp + 2);
    star[rp + 1] = i;
    r = rp + 1;
  }
  for (const auto& s : star) ra.boundary.push_back(s.value_or(0));
  return ra;
}

RoundAssignment assign_ntr(const ExecutionTrace& t) { return ntr_from(t, 0, std::nullopt); }

std::uint64_t latency_between(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j) {
  if (j >= t.events.size() || i >= t.events.size()) throw std::out_of_range("event id out of range");
  if (j <= i) return 0;
  return ntr_from(t, i, j).rounds[j];
}

std::int64_t naive_ntr_difference(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j) {
  const auto ra = assign_ntr(t);
  return static_cast<std::int64_t>(ra.rounds.at(j)) - static_cast<std::int64_t>(ra.rounds.at(i));
}

RoundAssignment assign_lcc(const ExecutionTrace& t) {
  RoundAssignment ra;
  ra.rounds.assign(t.events.size(), 0);
  for (const auto& e : t.events) {
    std::uint64_t k = 0;
    for (auto id : e.recv) k = std::max(k, ra.rounds[t.messages.at(id).sent_at]);
    ra.rounds[e.id] = k + 1;
  }
  return ra;
}

std::uint64_t lcc_rounds(const ExecutionTrace& t) {
  const auto ra = assign_lcc(t);
  if (ra.rounds.empty()) return 0;
  return *std::max_element(ra.rounds.begin(), ra.rounds.end()) - 1;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> find_holes(const ExecutionTrace& t) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> holes;
  const auto count = t.events.size();
  if (count < 2) return holes;
  std::vector<std::int64_t> diff(count, 0);
  for (const auto& m : t.messages) {
    if (!m.delivered_at) continue;
    ++diff[m.sent_at];
    --diff[*m.delivered_at];
  }
  std::int64_t open = 0;
  for (std::uint64_t l = 0; l + 1 < count; ++l) {
    open += diff[l];
    if (open == 0) holes.emplace_back(l, l + 1);
  }
  return holes;
}

bool is_covered(const ExecutionTrace& t) { return find_holes(t).empty(); }

std::vector<Hop> message_hops(const ExecutionTrace& t) {
  std::vector<Hop> hops;
  for (const auto& m : t.messages) {
    if (m.delivered_at) hops.push_back(Hop{m.sent_at, *m.delivered_at});
  }
  std::sort(hops.begin(), hops.end(),
            [](const Hop& a, const Hop& b) { return a.from != b.from ? a.from < b.from : a.to < b.to; });
  hops.erase(std::unique(hops.begin(), hops.end()), hops.end());
  return hops;
}

bool hops_cover(std::vector<Hop> hops, std::uint64_t i, std::uint64_t j) {
  if (i == j) return true;
  std::vector<Span> spans;
  for (const auto& h : hops) spans.push_back(Span{h.from, h.to, h});
  return spans_cover(std::move(spans), i, j);
}

HopCover min_hop_cover(const ExecutionTrace& t) {
  if (t.events.empty()) return {};
  return cover(t, 0, t.events.size() - 1);
}

HopCover min_hop_cover_between(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j) {
  return cover(t, i, j);
}

std::vector<OpLatency> operation_latencies(const ExecutionTrace& t, bool with_hop_cover) {
  std::map<std::uint64_t, OpLatency> ops;
  for (const auto& e : t.events) {
    for (const auto& c : e.calls) {
      auto& o = ops[c.op];
      o.op = c.op;
      o.node = c.node;
      o.kind = c.kind;
      o.call_event = e.id;
    }
  }
  std::vector<OpLatency> out;
  for (const auto& e : t.events) {
    for (const auto& r : e.replies) {
      auto it = ops.find(r.op);
      if (it == ops.end()) continue;
      auto o = it->second;
      o.return_event = e.id;
      try {
        o.rounds = latency_between(t, o.call_event, o.return_event);
        if (with_hop_cover) o.hop_cover = min_hop_cover_between(t, o.call_event, o.return_event).k;
      } catch (const CoveredRequired&) {
        o.rounds = assign_ira_from(t, o.call_event).rounds[o.return_event];
        o.fallback = true;
      }
      out.push_back(o);
    }
  }
  std::sort(out.begin(), out.end(), [](const OpLatency& a, const OpLatency& b) { return a.op < b.op; });
  return out;
}

}  // namespace lasnap
