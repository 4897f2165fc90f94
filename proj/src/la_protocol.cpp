#include "lasnap/la_protocol.hpp"

#include <string>

namespace lasnap {

namespace {

class Stepper {
 public:
  explicit Stepper(LaNodeState& s) : s_(s) {}

  void app_propose(const AppPropose& p) {
    check_shape(p.value);
    s_.mpool = join(s_.mpool, p.value);
    broadcast(LaKind::Request, p.value, s_.me);
    s_.pending_ops.push_back(PendingProposal{p.id, p.value});
  }

  void deliver(const LaMessage& msg) {
    if (msg.sender >= s_.n || msg.sender == s_.me) {
      throw ProtocolError("message from unknown sender " + std::to_string(msg.sender));
    }
    if (msg.receiver != s_.me) {
      throw ProtocolError("message addressed to node " + std::to_string(msg.receiver) +
                          " delivered to node " + std::to_string(s_.me));
    }
    if (msg.seq != s_.next_seq_in[msg.sender]) {
      throw ProtocolError("FIFO violation on channel " + std::to_string(msg.sender) + "->" +
                          std::to_string(s_.me) + ": got seq " + std::to_string(msg.seq) +
                          ", expected " + std::to_string(s_.next_seq_in[msg.sender]));
    }
    check_shape(msg.value);
    ++s_.next_seq_in[msg.sender];

    switch (msg.kind) {
      case LaKind::Request:
        on_request(msg.value);
        break;
      case LaKind::Propose:
        on_propose(msg.sender, msg.value);
        break;
      case LaKind::Accept:
        on_accept(msg.value);
        break;
    }
  }

  void run_guards() {
    bool changed = true;
    while (changed) {
      changed = start_proposal();
      changed = fold_quorums() || changed;
      changed = try_learn() || changed;
    }
  }

  // Reports proposals already covered by learned that no learn has reported yet.
  void flush_satisfied() {
    auto satisfied = take_satisfied();
    if (!satisfied.empty()) {
      out_.learns.push_back(LearnReport{s_.learned, std::move(satisfied)});
    }
  }

  LaOutput take_output() { return std::move(out_); }

 private:
  void check_shape(const AsoVector& v) const {
    if (v.m() != s_.bottom.m() || v.n() != s_.bottom.n()) {
      throw DimensionMismatch("lattice value has shape (" + std::to_string(v.m()) + "," +
                              std::to_string(v.n()) + "), node expects (" +
                              std::to_string(s_.bottom.m()) + "," +
                              std::to_string(s_.bottom.n()) + ")");
    }
  }

  void send(LaKind kind, const AsoVector& value, NodeId to) {
    out_.messages.push_back(LaMessage{kind, value, s_.me, to, s_.next_seq_out[to]++});
  }

  // Every node other than self and `except` (pass me to exclude only self).
  void broadcast(LaKind kind, const AsoVector& value, NodeId except) {
    for (NodeId j = 0; j < s_.n; ++j) {
      if (j != s_.me && j != except) send(kind, value, j);
    }
  }

  void on_request(const AsoVector& v) {
    const auto known = join(join(s_.mpool, s_.proposing), s_.learned);
    if (!leq(v, known)) {
      s_.mpool = join(s_.mpool, v);
      broadcast(LaKind::Request, v, s_.me);
    }
  }

  PendingEntry& support(const AsoVector& v, NodeId who, bool* created) {
    auto key = v.canonical();
    auto it = s_.pending.find(key);
    *created = it == s_.pending.end();
    if (*created) {
      it = s_.pending.emplace(key, PendingEntry{v, {}, false}).first;
      s_.pending_join = join(s_.pending_join, v);
    }
    auto& entry = it->second;
    const bool had_quorum = entry.supporters.size() >= s_.quorum();
    entry.supporters.insert(who);
    if (!had_quorum && entry.supporters.size() >= s_.quorum()) {
      s_.quorum_ready.push_back(key);
    }
    return entry;
  }

  void on_propose(NodeId sender, const AsoVector& v) {
    bool created = false;
    support(v, sender, &created);
    if (created) {
      support(v, s_.me, &created);
      broadcast(LaKind::Propose, v, s_.me);
    }
  }

  void on_accept(const AsoVector& w) {
    if (!leq(join(s_.proposing, s_.learned), w)) return;
    s_.validated = join(s_.validated, w);
    const bool grew = !(w == s_.learned);
    s_.learned = w;
    s_.proposing = s_.bottom;
    if (grew) {
      broadcast(LaKind::Accept, s_.learned, s_.me);
      out_.learns.push_back(LearnReport{s_.learned, take_satisfied()});
    }
  }

  bool start_proposal() {
    if (s_.mpool.is_bottom() || !s_.proposing.is_bottom()) return false;
    s_.proposing = std::move(s_.mpool);
    s_.mpool = s_.bottom;
    bool created = false;
    support(s_.proposing, s_.me, &created);
    broadcast(LaKind::Propose, s_.proposing, s_.me);
    return true;
  }

  bool fold_quorums() {
    if (s_.quorum_ready.empty()) return false;
    for (const auto& key : s_.quorum_ready) {
      auto& entry = s_.pending.at(key);
      if (!entry.folded) {
        s_.validated = join(s_.validated, entry.value);
        entry.folded = true;
      }
    }
    s_.quorum_ready.clear();
    return true;
  }

  bool try_learn() {
    if (!leq(s_.pending_join, s_.validated)) return false;
    if (!strictly_below(s_.learned, s_.validated)) return false;
    s_.learned = s_.validated;
    s_.proposing = s_.bottom;
    broadcast(LaKind::Accept, s_.learned, s_.me);
    out_.learns.push_back(LearnReport{s_.learned, take_satisfied()});
    return true;
  }

  std::vector<PendingProposal> take_satisfied() {
    std::vector<PendingProposal> done;
    std::deque<PendingProposal> rest;
    for (auto& p : s_.pending_ops) {
      if (leq(p.value, s_.learned)) {
        done.push_back(std::move(p));
      } else {
        rest.push_back(std::move(p));
      }
    }
    s_.pending_ops = std::move(rest);
    return done;
  }

  LaNodeState& s_;
  LaOutput out_;
};

}  // namespace

const char* to_string(LaKind kind) {
  switch (kind) {
    case LaKind::Request:
      return "REQUEST";
    case LaKind::Propose:
      return "PROPOSE";
    case LaKind::Accept:
      return "ACCEPT";
  }
  return "?";
}

LaKind la_kind_from_string(std::string_view s) {
  if (s == "REQUEST") return LaKind::Request;
  if (s == "PROPOSE") return LaKind::Propose;
  if (s == "ACCEPT") return LaKind::Accept;
  throw ProtocolError("unknown lattice agreement message kind '" + std::string(s) + "'");
}

LaNodeState la_init(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& lattice,
                    GuardMode mode) {
  if (n == 0 || me >= n) throw std::invalid_argument("node id out of range");
  if (2 * f >= n) throw std::invalid_argument("fault bound requires f < n/2");
  LaNodeState s;
  s.me = me;
  s.n = n;
  s.f = f;
  s.mode = mode;
  s.bottom = AsoVector::bottom(lattice);
  s.mpool = s.proposing = s.validated = s.learned = s.pending_join = s.bottom;
  s.next_seq_out.assign(n, 1);
  s.next_seq_in.assign(n, 1);
  return s;
}

std::pair<LaNodeState, LaOutput> la_step(LaNodeState s, const LaInput& in) {
  Stepper step(s);
  bool tick = false;
  if (const auto* p = std::get_if<AppPropose>(&in)) {
    step.app_propose(*p);
  } else if (const auto* d = std::get_if<Deliver>(&in)) {
    step.deliver(d->msg);
  } else {
    tick = true;
  }
  if (s.mode == GuardMode::Eager || tick) step.run_guards();
  step.flush_satisfied();
  auto out = step.take_output();
  return {std::move(s), std::move(out)};
}

bool la_guard_enabled(const LaNodeState& s) {
  if (!s.mpool.is_bottom() && s.proposing.is_bottom()) return true;
  if (!s.quorum_ready.empty()) return true;
  return leq(s.pending_join, s.validated) && strictly_below(s.learned, s.validated);
}

}  // namespace lasnap
