#include "lasnap/checkers.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace lasnap {

namespace {

std::string ev(std::uint64_t id) { return "e" + std::to_string(id); }

bool writes_something(const AsoVector& v) {
  return std::any_of(v.registers().begin(), v.registers().end(),
                     [](const RegisterCell& c) { return c.writes > 0; });
}

}  // namespace

LaVerdicts check_la_properties(const ExecutionTrace& t, bool fair) {
  LaVerdicts out;
  const auto bottom = AsoVector::bottom(t.header.lattice());

  struct Prop {
    std::uint64_t event;
    ProposalRecord rec;
  };
  std::vector<Prop> proposals;
  std::map<std::pair<NodeId, std::uint64_t>, std::size_t> by_id;
  struct Learn {
    std::uint64_t event;
    LearnRecord rec;
  };
  std::vector<Learn> learns;

  for (const auto& e : t.events) {
    for (const auto& p : e.proposals) {
      by_id[{p.node, p.la_id}] = proposals.size();
      proposals.push_back({e.id, p});
    }
    for (const auto& l : e.learns) learns.push_back({e.id, l});
  }

  auto fail = [](Verdict& v, std::string detail, std::vector<std::uint64_t> events) {
    if (!v.pass) return;
    v.pass = false;
    v.detail = std::move(detail);
    v.events = std::move(events);
  };

  for (const auto& l : learns) {
    auto joined = bottom;
    for (const auto& p : proposals) {
      if (p.event > l.event) break;
      if (leq(p.rec.value, l.rec.value)) joined = join(joined, p.rec.value);
    }
    if (!(joined == l.rec.value)) {
      fail(out.validity,
           "value learned by node " + std::to_string(l.rec.node) + " at " + ev(l.event) +
               " is not a join of proposed values",
           {l.event});
    }
    for (auto id : l.rec.completes) {
      auto it = by_id.find({l.rec.node, id});
      if (it == by_id.end() || !leq(proposals[it->second].rec.value, l.rec.value)) {
        fail(out.validity,
             "learn at " + ev(l.event) + " completes proposal " + std::to_string(id) +
                 " without containing it",
             {l.event});
      }
    }
  }

  std::map<NodeId, const Learn*> last;
  for (const auto& l : learns) {
    auto& prev = last[l.rec.node];
    if (prev && !leq(prev->rec.value, l.rec.value)) {
      fail(out.stability,
           "node " + std::to_string(l.rec.node) + " learned a smaller value at " + ev(l.event),
           {prev->event, l.event});
    }
    prev = &l;
  }

  std::map<std::string, const Learn*> distinct;
  for (const auto& l : learns) distinct.emplace(l.rec.value.canonical(), &l);
  std::vector<const Learn*> values;
  for (const auto& [k, l] : distinct) values.push_back(l);
  for (std::size_t a = 0; a < values.size() && out.consistency.pass; ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (!comparable(values[a]->rec.value, values[b]->rec.value)) {
        fail(out.consistency,
             "learns at " + ev(values[a]->event) + " and " + ev(values[b]->event) +
                 " are incomparable",
             {values[a]->event, values[b]->event});
        break;
      }
    }
  }

  if (fair) {
    std::set<std::pair<NodeId, std::uint64_t>> done;
    for (const auto& l : learns) {
      for (auto id : l.rec.completes) done.insert({l.rec.node, id});
    }
    for (const auto& p : proposals) {
      if (t.crashed_at.contains(p.rec.node)) continue;
      if (!done.contains({p.rec.node, p.rec.la_id})) {
        fail(out.liveness,
             "proposal " + std::to_string(p.rec.la_id) + " of correct node " +
                 std::to_string(p.rec.node) + " from " + ev(p.event) + " is never learned",
             {p.event});
      }
    }
  }
  return out;
}

History extract_history(const ExecutionTrace& t) {
  std::map<std::uint64_t, OpRecord> ops;
  for (const auto& e : t.events) {
    for (const auto& c : e.calls) {
      if (c.kind == CallKind::Propose) continue;
      OpRecord o;
      o.op = c.op;
      o.node = c.node;
      o.kind = c.kind;
      o.reg = c.reg;
      o.arg = c.arg;
      o.call_event = e.id;
      ops[c.op] = std::move(o);
    }
    for (const auto& p : e.proposals) {
      if (!p.op) continue;
      auto it = ops.find(*p.op);
      if (it == ops.end()) continue;
      auto& o = it->second;
      if (!o.is_update() || writes_something(p.value)) o.marker = p.value;
    }
    for (const auto& r : e.replies) {
      auto it = ops.find(r.op);
      if (it == ops.end()) continue;
      auto& o = it->second;
      o.return_event = e.id;
      o.result = r.result;
      o.witness = r.witness;
      if (r.marker) o.marker = r.marker;
    }
  }
  History h;
  for (auto& [id, o] : ops) h.push_back(std::move(o));
  std::sort(h.begin(), h.end(),
            [](const OpRecord& a, const OpRecord& b) { return a.call_event < b.call_event; });
  return h;
}

std::string check_legal(const std::vector<OpRecord>& order, const LatticeConfig& cfg) {
  std::vector<std::string> regs(cfg.m, cfg.initial_payload);
  for (const auto& o : order) {
    if (o.is_update()) {
      if (o.reg >= regs.size()) return "op " + std::to_string(o.op) + " writes a missing register";
      regs[o.reg] = o.arg;
    } else if (o.result != regs) {
      return "snapshot op " + std::to_string(o.op) + " at " + ev(o.call_event) +
             " returns a vector that is not the current register state";
    }
  }
  return {};
}

std::string check_real_time(const std::vector<OpRecord>& order) {
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (order[b].return_event && *order[b].return_event < order[a].call_event) {
        return "op " + std::to_string(order[b].op) + " completes before op " +
               std::to_string(order[a].op) + " starts but is ordered after it";
      }
    }
  }
  return {};
}

LinearizationResult linearize_by_learned_order(const History& h, const ExecutionTrace& t) {
  LinearizationResult res;
  const auto cfg = t.header.lattice();

  std::vector<AsoVector> learned;
  for (const auto& e : t.events) {
    for (const auto& l : e.learns) learned.push_back(l.value);
  }
  auto successful = [&](const OpRecord& o) {
    if (!o.marker) return false;
    const auto& cell = o.marker->cell(o.reg);
    return std::any_of(learned.begin(), learned.end(),
                       [&](const AsoVector& w) { return w.cell(o.reg) == cell; });
  };

  // Snapshots are keyed by the value they returned, updates by the first
  // learned value that contains them.
  auto first_containing = [&](const AsoVector& marker) -> std::optional<AsoVector> {
    std::optional<AsoVector> best;
    for (const auto& w : learned) {
      if (leq(marker, w) && (!best || leq(w, *best))) best = w;
    }
    return best;
  };

  std::vector<std::pair<AsoVector, OpRecord>> keyed;
  for (const auto& o : h) {
    if (o.complete() && !o.witness) {
      res.failure = "complete op " + std::to_string(o.op) + " has no learned value";
      return res;
    }
    if (!o.is_update()) {
      if (o.complete()) keyed.emplace_back(*o.witness, o);
      continue;
    }
    if (!successful(o)) {
      if (o.complete()) res.lin.excluded.push_back(o.op);
      continue;
    }
    auto key = first_containing(*o.marker);
    if (!key) {
      res.failure = "update op " + std::to_string(o.op) + " appears in no learned value";
      return res;
    }
    keyed.emplace_back(std::move(*key), o);
  }

  for (std::size_t a = 0; a < keyed.size(); ++a) {
    for (std::size_t b = a + 1; b < keyed.size(); ++b) {
      if (!comparable(keyed[a].first, keyed[b].first)) {
        res.failure = "learned values of ops " + std::to_string(keyed[a].second.op) + " and " +
                      std::to_string(keyed[b].second.op) + " are incomparable";
        return res;
      }
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (!(x.first == y.first)) return leq(x.first, y.first);
    const auto& a = x.second;
    const auto& b = y.second;
    if (a.is_update() != b.is_update()) return a.is_update();
    if (a.is_update() && a.reg == b.reg) {
      const auto& ca = a.marker->cell(a.reg);
      const auto& cb = b.marker->cell(b.reg);
      if (!(ca == cb)) return cell_leq(ca, cb);
    }
    return a.node < b.node;
  });
  for (auto& [key, o] : keyed) res.lin.order.push_back(std::move(o));

  if (auto why = check_legal(res.lin.order, cfg); !why.empty()) {
    res.failure = why;
    return res;
  }
  if (auto why = check_real_time(res.lin.order); !why.empty()) {
    res.failure = why;
    return res;
  }
  res.ok = true;
  return res;
}

namespace {

class BruteForce {
 public:
  BruteForce(std::vector<OpRecord> ops, std::size_t complete, const LatticeConfig& cfg)
      : ops_(std::move(ops)), complete_(complete), regs_(cfg.m, cfg.initial_payload) {}

  bool search() { return dfs(0, 0); }

 private:
  // ops_[0, complete_) must all be placed; the rest are optional updates.
  bool dfs(std::uint32_t used, std::size_t placed_complete) {
    if (placed_complete == complete_) return true;
    auto key = std::make_pair(used, regs_);
    if (dead_.contains(key)) return false;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (used & (1u << i)) continue;
      if (!can_go_next(used, i)) continue;
      const auto& o = ops_[i];
      if (o.is_update()) {
        auto saved = regs_[o.reg];
        regs_[o.reg] = o.arg;
        const bool ok = dfs(used | (1u << i), placed_complete + (i < complete_ ? 1 : 0));
        regs_[o.reg] = saved;
        if (ok) return true;
      } else if (o.result == regs_) {
        if (dfs(used | (1u << i), placed_complete + 1)) return true;
      }
    }
    dead_.insert(std::move(key));
    return false;
  }

  // Op i may come next unless some unplaced complete op finished before it began.
  bool can_go_next(std::uint32_t used, std::size_t i) const {
    for (std::size_t p = 0; p < complete_; ++p) {
      if (p == i || (used & (1u << p))) continue;
      if (*ops_[p].return_event < ops_[i].call_event) return false;
    }
    return true;
  }

  std::vector<OpRecord> ops_;
  std::size_t complete_;
  std::vector<std::string> regs_;
  std::set<std::pair<std::uint32_t, std::vector<std::string>>> dead_;
};

}  // namespace

bool brute_force_linearizable(const History& h, const LatticeConfig& cfg) {
  std::vector<OpRecord> complete;
  std::vector<OpRecord> optional;
  for (const auto& o : h) {
    if (o.complete()) {
      complete.push_back(o);
    } else if (o.is_update()) {
      optional.push_back(o);
    }
  }
  if (complete.size() > kBruteForceCompleteLimit || optional.size() > kBruteForceIncompleteLimit) {
    throw std::length_error("history too large for the brute-force oracle");
  }
  const auto count = complete.size();
  complete.insert(complete.end(), optional.begin(), optional.end());
  return BruteForce(std::move(complete), count, cfg).search();
}

}  // namespace lasnap
