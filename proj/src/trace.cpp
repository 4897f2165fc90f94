#include "lasnap/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lasnap/json_io.hpp"

namespace lasnap {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json optional_vector(const std::optional<AsoVector>& v) {
  return v ? vector_to_json(*v) : json(nullptr);
}

std::optional<AsoVector> optional_vector(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return vector_from_json(*it);
}

json call_to_json(const CallRecord& c) {
  return {{"op", c.op},     {"node", c.node}, {"kind", to_string(c.kind)},
          {"reg", c.reg},   {"arg", c.arg},   {"value", optional_vector(c.value)}};
}

CallRecord call_from_json(const json& j) {
  CallRecord c;
  c.op = j.at("op").get<std::uint64_t>();
  c.node = j.at("node").get<NodeId>();
  c.kind = call_kind_from_string(j.at("kind").get<std::string>());
  c.reg = j.value("reg", std::size_t{0});
  c.arg = j.value("arg", std::string{});
  c.value = optional_vector(j, "value");
  return c;
}

json reply_to_json(const ReplyRecord& r) {
  return {{"op", r.op},
          {"node", r.node},
          {"kind", to_string(r.kind)},
          {"result", r.result},
          {"witness", optional_vector(r.witness)},
          {"marker", optional_vector(r.marker)}};
}

ReplyRecord reply_from_json(const json& j) {
  ReplyRecord r;
  r.op = j.at("op").get<std::uint64_t>();
  r.node = j.at("node").get<NodeId>();
  r.kind = call_kind_from_string(j.at("kind").get<std::string>());
  r.result = j.value("result", std::vector<std::string>{});
  r.witness = optional_vector(j, "witness");
  r.marker = optional_vector(j, "marker");
  return r;
}

json proposal_to_json(const ProposalRecord& p) {
  return {{"node", p.node},
          {"la_id", p.la_id},
          {"op", p.op ? json(*p.op) : json(nullptr)},
          {"value", vector_to_json(p.value)}};
}

ProposalRecord proposal_from_json(const json& j) {
  ProposalRecord p;
  p.node = j.at("node").get<NodeId>();
  p.la_id = j.at("la_id").get<std::uint64_t>();
  if (auto it = j.find("op"); it != j.end() && !it->is_null()) p.op = it->get<std::uint64_t>();
  p.value = vector_from_json(j.at("value"));
  return p;
}

json learn_to_json(const LearnRecord& l) {
  return {{"node", l.node}, {"value", vector_to_json(l.value)}, {"completes", l.completes}};
}

LearnRecord learn_from_json(const json& j) {
  LearnRecord l;
  l.node = j.at("node").get<NodeId>();
  l.value = vector_from_json(j.at("value"));
  l.completes = j.value("completes", std::vector<std::uint64_t>{});
  return l;
}

template <class T, class F>
json list_to_json(const std::vector<T>& xs, F f) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

template <class T, class F>
std::vector<T> list_from_json(const json& j, const char* key, F f) {
  std::vector<T> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  for (const auto& x : *it) out.push_back(f(x));
  return out;
}

bool contains(const std::vector<NodeId>& xs, NodeId x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

json vector_to_json(const AsoVector& x) {
  json cells = json::array();
  for (const auto& c : x.registers()) cells.push_back(json::array({c.writes, c.value}));
  return {{"cells", cells}, {"counters", x.counters()}};
}

AsoVector vector_from_json(const json& j) {
  std::vector<RegisterCell> cells;
  for (const auto& c : j.at("cells")) {
    if (!c.is_array() || c.size() != 2) throw TraceError("register cell must be [writes, value]");
    cells.push_back(RegisterCell{c[0].get<std::uint64_t>(), c[1].get<std::string>()});
  }
  return AsoVector(std::move(cells), j.at("counters").get<std::vector<std::uint64_t>>());
}

const char* to_string(CallKind kind) {
  switch (kind) {
    case CallKind::Update:
      return "update";
    case CallKind::Snapshot:
      return "snapshot";
    case CallKind::MwUpdate:
      return "mw-update";
    case CallKind::Propose:
      return "propose";
  }
  return "?";
}

CallKind call_kind_from_string(std::string_view s) {
  if (s == "update") return CallKind::Update;
  if (s == "snapshot") return CallKind::Snapshot;
  if (s == "mw-update") return CallKind::MwUpdate;
  if (s == "propose") return CallKind::Propose;
  throw TraceError("unknown call kind '" + std::string(s) + "'");
}

std::string message_digest(const MessageRecord& m) {
  std::string bytes = m.kind;
  bytes.push_back('\0');
  bytes += m.tag;
  bytes.push_back('\0');
  if (m.value) bytes += m.value->canonical();
  return hex64(fnv1a64(bytes));
}

std::vector<std::uint64_t> source_events(const ExecutionTrace& t, const Event& e) {
  std::vector<std::uint64_t> out;
  out.reserve(e.recv.size());
  for (auto id : e.recv) out.push_back(t.messages.at(id).sent_at);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_trace(const ExecutionTrace& t) {
  const auto n = t.header.n;
  auto fail = [](const std::string& what) { throw TraceError(what); };
  if (t.header.version != 1) fail("unsupported trace version");
  if (n == 0 || 2 * t.header.f >= n) fail("header requires n >= 1 and f < n/2");
  for (const auto& [node, at] : t.crashed_at) {
    if (node >= n) fail("crash record for unknown node " + std::to_string(node));
  }
  for (std::size_t i = 0; i < t.messages.size(); ++i) {
    if (t.messages[i].id != i) fail("message ids must be dense and in send order");
  }

  std::vector<bool> sent(t.messages.size(), false);
  std::vector<std::optional<std::uint64_t>> delivered(t.messages.size());
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> next_send_seq;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> last_recv_seq;

  for (std::size_t idx = 0; idx < t.events.size(); ++idx) {
    const auto& e = t.events[idx];
    const auto where = "event " + std::to_string(idx) + ": ";
    if (e.id != idx) fail(where + "event ids must be sequential from 0");
    if (e.nodes.empty()) fail(where + "event has no participating node");
    for (auto p : e.nodes) {
      if (p >= n) fail(where + "unknown node " + std::to_string(p));
      auto c = t.crashed_at.find(p);
      if (c != t.crashed_at.end() && e.id >= c->second) {
        fail(where + "node " + std::to_string(p) + " takes a step after crashing");
      }
    }
    for (auto id : e.recv) {
      if (id >= t.messages.size() || !sent[id]) {
        fail(where + "receives message " + std::to_string(id) + " not in the buffer");
      }
      const auto& m = t.messages[id];
      if (delivered[id]) fail(where + "message " + std::to_string(id) + " delivered twice");
      if (!contains(e.nodes, m.to)) {
        fail(where + "message " + std::to_string(id) + " received by a non-participant");
      }
      auto& last = last_recv_seq[{m.from, m.to}];
      if (m.seq != last + 1) {
        fail(where + "FIFO violation on channel " + std::to_string(m.from) + "->" +
             std::to_string(m.to) + " at seq " + std::to_string(m.seq));
      }
      last = m.seq;
      delivered[id] = e.id;
    }
    for (auto id : e.send) {
      if (id >= t.messages.size()) fail(where + "sends unknown message " + std::to_string(id));
      if (sent[id]) fail(where + "message " + std::to_string(id) + " sent twice");
      const auto& m = t.messages[id];
      if (m.sent_at != e.id) fail(where + "message " + std::to_string(id) + " sent_at mismatch");
      if (!contains(e.nodes, m.from)) fail(where + "sender does not participate");
      if (m.to >= n || m.to == m.from) fail(where + "bad receiver on message " + std::to_string(id));
      auto& next = next_send_seq[{m.from, m.to}];
      if (m.seq != ++next) {
        fail(where + "channel " + std::to_string(m.from) + "->" + std::to_string(m.to) +
             " skips seq " + std::to_string(next));
      }
      sent[id] = true;
    }
    for (const auto& c : e.calls) {
      if (!contains(e.nodes, c.node)) fail(where + "call at a non-participant");
    }
    for (const auto& r : e.replies) {
      if (!contains(e.nodes, r.node)) fail(where + "reply at a non-participant");
    }
    for (const auto& p : e.proposals) {
      if (!contains(e.nodes, p.node)) fail(where + "proposal at a non-participant");
    }
    for (const auto& l : e.learns) {
      if (!contains(e.nodes, l.node)) fail(where + "learn at a non-participant");
    }
  }
  for (std::size_t i = 0; i < t.messages.size(); ++i) {
    if (!sent[i]) fail("message " + std::to_string(i) + " is never sent");
    if (t.messages[i].delivered_at != delivered[i]) {
      fail("message " + std::to_string(i) + " delivery record disagrees with events");
    }
  }
}

void export_trace(const ExecutionTrace& t, std::ostream& out) {
  const auto& h = t.header;
  json header = {{"type", "header"}, {"version", h.version}, {"n", h.n},
                 {"f", h.f},         {"seed", h.seed},       {"protocol", h.protocol},
                 {"label", h.label}, {"m", h.m},             {"initial", h.initial}};
  out << header.dump() << '\n';
  for (const auto& e : t.events) {
    json sends = json::array();
    for (auto id : e.send) {
      const auto& m = t.messages.at(id);
      sends.push_back({{"id", m.id},
                       {"from", m.from},
                       {"to", m.to},
                       {"seq", m.seq},
                       {"kind", m.kind},
                       {"value", optional_vector(m.value)},
                       {"tag", m.tag},
                       {"digest", message_digest(m)}});
    }
    json line = {{"type", "event"},
                 {"id", e.id},
                 {"kind", e.kind},
                 {"nodes", e.nodes},
                 {"recv", e.recv},
                 {"send", sends},
                 {"calls", list_to_json(e.calls, call_to_json)},
                 {"replies", list_to_json(e.replies, reply_to_json)},
                 {"proposals", list_to_json(e.proposals, proposal_to_json)},
                 {"learns", list_to_json(e.learns, learn_to_json)}};
    out << line.dump() << '\n';
  }
  for (const auto& [node, at] : t.crashed_at) {
    out << json{{"type", "crash"}, {"node", node}, {"at", at}}.dump() << '\n';
  }
}

std::string export_trace(const ExecutionTrace& t) {
  std::ostringstream os;
  export_trace(t, os);
  return os.str();
}

ExecutionTrace import_trace(std::istream& in) {
  ExecutionTrace t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.front() == '#') continue;
      const auto j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw TraceError("duplicate header");
        auto& h = t.header;
        h.version = j.at("version").get<int>();
        h.n = j.at("n").get<std::size_t>();
        h.f = j.at("f").get<std::size_t>();
        h.seed = j.value("seed", std::uint64_t{0});
        h.protocol = j.value("protocol", std::string{});
        h.label = j.value("label", std::string{});
        h.m = j.value("m", h.n);
        h.initial = j.value("initial", std::string{});
        have_header = true;
        continue;
      }
      if (!have_header) throw TraceError("trace must start with a header line");
      if (type == "crash") {
        t.crashed_at[j.at("node").get<NodeId>()] = j.at("at").get<std::uint64_t>();
        continue;
      }
      if (type != "event") throw TraceError("unknown record type '" + type + "'");
      Event e;
      e.id = j.at("id").get<std::uint64_t>();
      e.kind = j.value("kind", std::string{"step"});
      e.nodes = j.at("nodes").get<std::vector<NodeId>>();
      e.recv = j.value("recv", std::vector<std::uint64_t>{});
      for (auto id : e.recv) {
        if (id >= t.messages.size()) {
          throw TraceError("event " + std::to_string(e.id) + " receives unknown message " +
                           std::to_string(id));
        }
        if (t.messages[id].delivered_at) {
          throw TraceError("message " + std::to_string(id) + " delivered twice");
        }
        t.messages[id].delivered_at = e.id;
      }
      if (auto it = j.find("send"); it != j.end()) {
        for (const auto& s : *it) {
          MessageRecord m;
          m.id = s.at("id").get<std::uint64_t>();
          m.from = s.at("from").get<NodeId>();
          m.to = s.at("to").get<NodeId>();
          m.seq = s.at("seq").get<std::uint64_t>();
          m.kind = s.at("kind").get<std::string>();
          m.value = optional_vector(s, "value");
          m.tag = s.value("tag", std::string{});
          m.sent_at = e.id;
          if (m.id != t.messages.size()) {
            throw TraceError("message ids must be dense and in send order (got " +
                             std::to_string(m.id) + ")");
          }
          if (auto d = s.find("digest"); d != s.end() && d->get<std::string>() != message_digest(m)) {
            throw TraceError("digest mismatch on message " + std::to_string(m.id));
          }
          e.send.push_back(m.id);
          t.messages.push_back(std::move(m));
        }
      }
      e.calls = list_from_json<CallRecord>(j, "calls", call_from_json);
      e.replies = list_from_json<ReplyRecord>(j, "replies", reply_from_json);
      e.proposals = list_from_json<ProposalRecord>(j, "proposals", proposal_from_json);
      e.learns = list_from_json<LearnRecord>(j, "learns", learn_from_json);
      t.events.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw TraceError("line " + std::to_string(lineno) + ": malformed record: " + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw TraceError("line " + std::to_string(lineno) + ": " + ex.what());
  }
  if (!have_header) throw TraceError("trace has no header line");
  validate_trace(t);
  return t;
}

ExecutionTrace import_trace_string(const std::string& text) {
  std::istringstream in(text);
  return import_trace(in);
}

ExecutionTrace import_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file " + path);
  return import_trace(in);
}

}  // namespace lasnap
