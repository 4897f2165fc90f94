#include "lasnap/aso_adapter.hpp"

#include <algorithm>

namespace lasnap {

namespace {

void require_idle(const AsoClientState& s) {
  if (s.outstanding) {
    throw AsoUsageError("node " + std::to_string(s.me) + " already has an operation in flight");
  }
}

AppPropose start_phase(AsoClientState& s, AsoVector proposal) {
  auto& op = *s.outstanding;
  op.proposal = std::move(proposal);
  op.la_id = s.next_la_id++;
  return AppPropose{op.la_id, op.proposal};
}

AppPropose begin_snapshot(AsoClientState& s) {
  ++s.r;
  return start_phase(s, make_snapshot_vector(s.cfg, s.me, s.r));
}

}  // namespace

const char* to_string(AsoOpKind kind) {
  switch (kind) {
    case AsoOpKind::Update:
      return "update";
    case AsoOpKind::Snapshot:
      return "snapshot";
    case AsoOpKind::MwUpdate:
      return "mw-update";
  }
  return "?";
}

AsoClientState aso_init(NodeId me, const LatticeConfig& cfg) {
  cfg.validate();
  if (me >= cfg.n) throw std::out_of_range("node id out of range");
  AsoClientState s;
  s.me = me;
  s.cfg = cfg;
  return s;
}

std::pair<AsoClientState, AppPropose> aso_update(AsoClientState s, std::size_t i,
                                                 std::string v, std::uint64_t op_id) {
  if (i != s.me) {
    throw AsoUsageError("node " + std::to_string(s.me) + " cannot write register " +
                        std::to_string(i));
  }
  require_idle(s);
  ++s.w;
  s.outstanding = OutstandingOp{AsoOpKind::Update, op_id, i, v, {}, 1, 0};
  auto p = start_phase(s, make_update_vector(s.cfg, i, s.w, std::move(v)));
  return {std::move(s), std::move(p)};
}

std::pair<AsoClientState, AppPropose> aso_snapshot(AsoClientState s, std::uint64_t op_id) {
  require_idle(s);
  s.outstanding = OutstandingOp{AsoOpKind::Snapshot, op_id, 0, {}, {}, 1, 0};
  auto p = begin_snapshot(s);
  return {std::move(s), std::move(p)};
}

std::pair<AsoClientState, AppPropose> aso_update_mw(AsoClientState s, std::size_t j,
                                                    std::string v, std::uint64_t op_id) {
  if (j >= s.cfg.m) throw std::out_of_range("register index out of range");
  require_idle(s);
  s.outstanding = OutstandingOp{AsoOpKind::MwUpdate, op_id, j, std::move(v), {}, 1, 0};
  auto p = begin_snapshot(s);
  return {std::move(s), std::move(p)};
}

AsoProgress aso_on_learn(AsoClientState s, const LearnReport& report) {
  AsoProgress out;
  if (!s.outstanding) {
    out.state = std::move(s);
    return out;
  }
  auto& op = *s.outstanding;
  const bool hit = std::any_of(report.satisfied.begin(), report.satisfied.end(),
                               [&](const PendingProposal& p) { return p.id == op.la_id; });
  if (!hit) {
    out.state = std::move(s);
    return out;
  }

  if (op.kind == AsoOpKind::MwUpdate && op.phase == 1) {
    op.phase = 2;
    const auto writes = report.value.cell(op.reg).writes + 1;
    out.next = start_phase(s, make_update_vector(s.cfg, op.reg, writes, op.payload));
    out.state = std::move(s);
    return out;
  }

  AsoCompletion done;
  done.op_id = op.op_id;
  done.kind = op.kind;
  done.witness = report.value;
  done.marker = op.proposal;
  if (op.kind == AsoOpKind::Snapshot) done.result = project_registers(report.value);
  s.outstanding.reset();
  out.completion = std::move(done);
  out.state = std::move(s);
  return out;
}

}  // namespace lasnap
