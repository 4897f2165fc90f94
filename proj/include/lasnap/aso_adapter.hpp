#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lasnap/la_protocol.hpp"
#include "lasnap/lattice.hpp"

namespace lasnap {

enum class AsoOpKind : std::uint8_t { Update, Snapshot, MwUpdate };

const char* to_string(AsoOpKind kind);

class AsoUsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct OutstandingOp {
  AsoOpKind kind = AsoOpKind::Update;
  std::uint64_t op_id = 0;
  std::size_t reg = 0;
  std::string payload;
  AsoVector proposal;  // vector handed to LA for the current phase
  int phase = 1;       // MwUpdate: 1 = snapshot, 2 = write
  std::uint64_t la_id = 0;
};

struct AsoClientState {
  NodeId me = 0;
  LatticeConfig cfg;
  std::uint64_t w = 0;
  std::uint64_t r = 0;
  std::uint64_t next_la_id = 1;
  std::optional<OutstandingOp> outstanding;
};

struct AsoCompletion {
  std::uint64_t op_id = 0;
  AsoOpKind kind = AsoOpKind::Update;
  std::vector<std::string> result;  // snapshot payloads; empty for updates
  AsoVector witness;                // learned value that completed the op
  AsoVector marker;                 // the op's own update or snapshot vector
};

struct AsoProgress {
  AsoClientState state;
  std::optional<AsoCompletion> completion;
  std::optional<AppPropose> next;  // MwUpdate phase 2 proposal
};

AsoClientState aso_init(NodeId me, const LatticeConfig& cfg);

/// Single-writer update: only register `me` may be written.
std::pair<AsoClientState, AppPropose> aso_update(AsoClientState s, std::size_t i,
                                                 std::string v, std::uint64_t op_id);
std::pair<AsoClientState, AppPropose> aso_snapshot(AsoClientState s, std::uint64_t op_id);
/// Multi-writer update: a snapshot, then a write one past the observed count.
std::pair<AsoClientState, AppPropose> aso_update_mw(AsoClientState s, std::size_t j,
                                                    std::string v, std::uint64_t op_id);

/// Feeds one learn report; completes the outstanding op if its proposal is satisfied.
AsoProgress aso_on_learn(AsoClientState s, const LearnReport& report);

}  // namespace lasnap
