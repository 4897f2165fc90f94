#include "lasnap/baselines.hpp"

namespace lasnap {

namespace {

void broadcast(std::vector<OutMsg>& out, NodeId me, std::size_t n, const std::string& kind,
               const std::optional<AsoVector>& value, const std::string& tag) {
  for (NodeId j = 0; j < n; ++j) {
    if (j != me) out.push_back(OutMsg{j, kind, value, tag});
  }
}

const AsoVector& need_value(const InMsg& m) {
  if (!m.value) throw SimError(m.kind + " message without a value");
  return *m.value;
}

// Acceptor side: ACK if the proposal covers everything accepted so far.
std::optional<AsoVector> accept(FaleiroState& s, const AsoVector& v) {
  if (leq(s.accepted, v)) {
    s.accepted = v;
    return std::nullopt;
  }
  s.accepted = join(s.accepted, v);
  return s.accepted;
}

void record_reply(FaleiroState& s, NodeId from, const std::optional<AsoVector>& nack) {
  if (nack) {
    s.nacks[from] = *nack;
  } else {
    s.acks.insert(from);
  }
}

void send_proposal(FaleiroState& s, BaselineOutput& out) {
  s.acks.clear();
  s.nacks.clear();
  broadcast(out.messages, s.me, s.n, "PROPOSAL", s.proposed, std::to_string(s.number));
  record_reply(s, s.me, accept(s, s.proposed));
}

void tally(FaleiroState& s, BaselineOutput& out) {
  while (s.active && s.acks.size() + s.nacks.size() >= s.majority()) {
    if (s.nacks.empty()) {
      s.learned = s.proposed;
      s.active = false;
      out.learned = s.proposed;
      return;
    }
    for (const auto& [j, v] : s.nacks) s.proposed = join(s.proposed, v);
    ++s.number;
    ++s.reproposals;
    send_proposal(s, out);
  }
}

}  // namespace

FaleiroState faleiro_init(NodeId me, std::size_t n, const LatticeConfig& cfg) {
  if (n == 0 || me >= n) throw std::invalid_argument("node id out of range");
  FaleiroState s;
  s.me = me;
  s.n = n;
  s.proposed = s.accepted = AsoVector::bottom(cfg);
  return s;
}

std::pair<FaleiroState, BaselineOutput> faleiro_step(FaleiroState s, const FaleiroInput& in) {
  BaselineOutput out;
  if (const auto* st = std::get_if<FaleiroStart>(&in)) {
    if (s.started) throw SimError("one-shot proposer already proposed");
    s.started = true;
    s.active = true;
    s.number = 1;
    s.proposed = join(s.proposed, st->value);
    send_proposal(s, out);
    tally(s, out);
    return {std::move(s), std::move(out)};
  }

  const auto& m = std::get<FaleiroDeliver>(in).msg;
  if (m.from >= s.n || m.from == s.me) throw SimError("message from unknown sender");
  const auto number = std::stoull(m.tag);
  if (m.kind == "PROPOSAL") {
    auto nack = accept(s, need_value(m));
    if (nack) {
      out.messages.push_back(OutMsg{m.from, "NACK", std::move(nack), m.tag});
    } else {
      out.messages.push_back(OutMsg{m.from, "ACK", std::nullopt, m.tag});
    }
  } else if (m.kind == "ACK" || m.kind == "NACK") {
    if (s.active && number == s.number) {
      record_reply(s, m.from, m.kind == "NACK" ? std::optional(need_value(m)) : std::nullopt);
      tally(s, out);
    }
  } else {
    throw SimError("unknown message kind '" + m.kind + "'");
  }
  return {std::move(s), std::move(out)};
}

GargState garg_init(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& cfg) {
  if (n == 0 || me >= n) throw std::invalid_argument("node id out of range");
  if (2 * f >= n) throw std::invalid_argument("fault bound requires f < n/2");
  GargState s;
  s.me = me;
  s.n = n;
  s.f = f;
  s.view.assign(n, AsoVector::bottom(cfg));
  return s;
}

bool garg_equivalence_quorum(const GargState& s) {
  std::size_t same = 0;
  for (const auto& v : s.view) {
    if (v == s.view[s.me]) ++same;
  }
  return same >= s.n - s.f;
}

std::pair<GargState, BaselineOutput> garg_step(GargState s, const GargInput& in) {
  BaselineOutput out;
  if (const auto* st = std::get_if<GargStart>(&in)) {
    if (s.started) throw SimError("one-shot proposer already proposed");
    s.started = true;
    s.view[s.me] = join(s.view[s.me], st->value);
    broadcast(out.messages, s.me, s.n, "VALUE", st->value, {});
  } else {
    const auto& m = std::get<GargDeliver>(in).msg;
    if (m.from >= s.n || m.from == s.me) throw SimError("message from unknown sender");
    if (m.kind != "VALUE") throw SimError("unknown message kind '" + m.kind + "'");
    const auto& v = need_value(m);
    s.view[m.from] = join(s.view[m.from], v);
    if (!leq(v, s.view[s.me])) {
      s.view[s.me] = join(s.view[s.me], v);
      broadcast(out.messages, s.me, s.n, "VALUE", v, {});
    }
  }
  if (s.started && !s.learned && garg_equivalence_quorum(s)) {
    s.learned = s.view[s.me];
    out.learned = s.learned;
  }
  return {std::move(s), std::move(out)};
}

ProcessOutput FaleiroProcess::wrap(BaselineOutput&& out) {
  ProcessOutput res;
  res.messages = std::move(out.messages);
  if (out.learned) {
    res.learns.push_back(LearnRecord{s_.me, *out.learned, {1}});
    res.replies.push_back(ReplyRecord{op_, s_.me, CallKind::Propose, {}, *out.learned, std::nullopt});
  }
  return res;
}

ProcessOutput FaleiroProcess::on_call(const CallRecord& call) {
  if (call.kind != CallKind::Propose || !call.value) throw SimError("one-shot nodes only take propose");
  op_ = call.op;
  auto [s, out] = faleiro_step(std::move(s_), FaleiroStart{*call.value});
  s_ = std::move(s);
  ProcessOutput res;
  res.proposals.push_back(ProposalRecord{s_.me, 1, call.op, *call.value});
  res.append(wrap(std::move(out)));
  return res;
}

ProcessOutput FaleiroProcess::on_deliver(const InMsg& msg) {
  auto [s, out] = faleiro_step(std::move(s_), FaleiroDeliver{msg});
  s_ = std::move(s);
  return wrap(std::move(out));
}

ProcessOutput GargProcess::wrap(BaselineOutput&& out) {
  ProcessOutput res;
  res.messages = std::move(out.messages);
  if (out.learned) {
    res.learns.push_back(LearnRecord{s_.me, *out.learned, {1}});
    res.replies.push_back(ReplyRecord{op_, s_.me, CallKind::Propose, {}, *out.learned, std::nullopt});
  }
  return res;
}

ProcessOutput GargProcess::on_call(const CallRecord& call) {
  if (call.kind != CallKind::Propose || !call.value) throw SimError("one-shot nodes only take propose");
  op_ = call.op;
  auto [s, out] = garg_step(std::move(s_), GargStart{*call.value});
  s_ = std::move(s);
  ProcessOutput res;
  res.proposals.push_back(ProposalRecord{s_.me, 1, call.op, *call.value});
  res.append(wrap(std::move(out)));
  return res;
}

ProcessOutput GargProcess::on_deliver(const InMsg& msg) {
  auto [s, out] = garg_step(std::move(s_), GargDeliver{msg});
  s_ = std::move(s);
  return wrap(std::move(out));
}

}  // namespace lasnap
