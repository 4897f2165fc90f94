#include "lasnap/trace_gen.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "lasnap/metrics.hpp"

namespace lasnap {

ExecutionTrace random_trace(std::uint64_t seed, const TraceGenOptions& opts) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  ExecutionTrace t;
  t.header.n = pick(1, std::max<std::size_t>(1, opts.max_n));
  t.header.seed = seed;
  t.header.protocol = "random";
  t.header.m = 1;
  const auto n = t.header.n;
  const auto events = pick(1, std::max<std::size_t>(1, opts.max_events));

  std::map<std::pair<NodeId, NodeId>, std::deque<std::uint64_t>> channels;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> next_seq;

  for (std::uint64_t id = 0; id < events; ++id) {
    Event e;
    e.id = id;
    std::vector<NodeId> nodes{static_cast<NodeId>(pick(0, n - 1))};
    if (n > 1 && coin(opts.multi_node)) {
      auto other = static_cast<NodeId>(pick(0, n - 2));
      if (other >= nodes[0]) ++other;
      nodes.push_back(other);
      std::sort(nodes.begin(), nodes.end());
    }
    e.nodes = nodes;

    // Receive: with high probability take the head of one or more channels.
    for (auto to : nodes) {
      for (NodeId from = 0; from < n; ++from) {
        auto& q = channels[{from, to}];
        while (!q.empty() && coin(id + 1 == events ? 0.9 : 0.55)) {
          e.recv.push_back(q.front());
          t.messages[q.front()].delivered_at = id;
          q.pop_front();
        }
      }
    }
    std::sort(e.recv.begin(), e.recv.end());

    bool in_flight = false;
    for (const auto& [ch, q] : channels) in_flight = in_flight || !q.empty();
    for (auto from : nodes) {
      if (n == 1) break;
      const bool must = !in_flight && from == nodes.front();
      const auto count = must ? pick(1, 2) : (coin(0.6) ? pick(1, 2) : 0);
      for (std::size_t c = 0; c < count; ++c) {
        auto to = static_cast<NodeId>(pick(0, n - 2));
        if (to >= from) ++to;
        MessageRecord m;
        m.id = t.messages.size();
        m.from = from;
        m.to = to;
        m.seq = ++next_seq[{from, to}];
        m.kind = "M";
        m.sent_at = id;
        channels[{from, to}].push_back(m.id);
        e.send.push_back(m.id);
        t.messages.push_back(std::move(m));
      }
    }
    e.kind = e.recv.empty() ? "local" : "deliver";
    t.events.push_back(std::move(e));
  }
  validate_trace(t);
  return t;
}

std::optional<ExecutionTrace> random_covered_trace(std::uint64_t seed, const TraceGenOptions& opts,
                                                   std::size_t attempts) {
  std::mt19937_64 derive(seed);
  for (std::size_t a = 0; a < attempts; ++a) {
    auto t = random_trace(a == 0 ? seed : derive(), opts);
    if (is_covered(t)) {
      t.header.seed = seed;
      return t;
    }
  }
  return std::nullopt;
}

}  // namespace lasnap
