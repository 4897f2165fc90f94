#include <gtest/gtest.h>

#include "doctored.hpp"
#include "lasnap/checkers.hpp"
#include "lasnap/fuzz.hpp"

using namespace lasnap;

namespace {

OpRecord op(std::uint64_t id, NodeId node, CallKind kind, std::size_t reg, std::string arg,
            std::uint64_t call, std::optional<std::uint64_t> ret, std::vector<std::string> result = {}) {
  OpRecord o;
  o.op = id;
  o.node = node;
  o.kind = kind;
  o.reg = reg;
  o.arg = std::move(arg);
  o.call_event = call;
  o.return_event = ret;
  o.result = std::move(result);
  return o;
}

const LatticeConfig kCfg2 = LatticeConfig::square(2, "init");

}  // namespace

TEST(LaProperties, HonestRunPasses) {
  const auto t = doctored::update_then_two_snapshots();
  const auto v = check_la_properties(t);
  EXPECT_TRUE(v.all());
}

TEST(LaProperties, IncomparableLearnFailsConsistency) {
  const auto t = doctored::incomparable_learn();
  const auto v = check_la_properties(t);
  EXPECT_FALSE(v.consistency.pass);
  EXPECT_EQ(v.consistency.events.size(), 2u);
  EXPECT_FALSE(v.validity.pass);
}

TEST(LaProperties, ShrinkingLearnFailsStability) {
  auto t = doctored::update_then_two_snapshots();
  const auto node = t.events.back().nodes.front();
  t.events.back().learns.push_back(LearnRecord{node, AsoVector::bottom(t.header.lattice()), {}});
  EXPECT_FALSE(check_la_properties(t).stability.pass);
}

TEST(LaProperties, UnlearnedProposalFailsLivenessOnlyWhenFair) {
  auto t = doctored::update_then_two_snapshots();
  t.events.back().proposals.push_back(
      ProposalRecord{t.events.back().nodes.front(), 99, std::nullopt, make_update_vector(t.header.lattice(), 2, 7, "q")});
  EXPECT_FALSE(check_la_properties(t, true).liveness.pass);
  EXPECT_TRUE(check_la_properties(t, false).all(false));
}

TEST(Linearize, SequentialUpdateThenSnapshot) {
  const auto t = doctored::update_then_two_snapshots();
  const auto h = extract_history(t);
  ASSERT_EQ(h.size(), 3u);
  const auto r = linearize_by_learned_order(h, t);
  ASSERT_TRUE(r.ok) << r.failure;
  ASSERT_EQ(r.lin.order.size(), 3u);
  EXPECT_EQ(r.lin.order[0].op, 0u);
  EXPECT_EQ(r.lin.order[1].result[0], "v");
  EXPECT_TRUE(brute_force_linearizable(h, t.header.lattice()));
}

TEST(Linearize, DoctoredControlsFailBoth) {
  for (const auto& t : {doctored::classic_read_pair(), doctored::ghost_value()}) {
    const auto h = extract_history(t);
    EXPECT_FALSE(linearize_by_learned_order(h, t).ok);
    EXPECT_FALSE(brute_force_linearizable(h, t.header.lattice()));
  }
}

TEST(BruteForce, EmptyHistory) { EXPECT_TRUE(brute_force_linearizable({}, kCfg2)); }

TEST(BruteForce, ClassicReadPair) {
  const History h{
      op(0, 0, CallKind::Update, 0, "v", 0, 9),
      op(1, 1, CallKind::Snapshot, 0, {}, 1, 3, {"v", "init"}),
      op(2, 1, CallKind::Snapshot, 0, {}, 4, 5, {"init", "init"}),
  };
  EXPECT_FALSE(brute_force_linearizable(h, kCfg2));
}

TEST(BruteForce, ConcurrentUpdatesDistinctRegisters) {
  const History h{
      op(0, 0, CallKind::Update, 0, "a", 0, 6),
      op(1, 1, CallKind::Update, 1, "b", 1, 7),
      op(2, 0, CallKind::Snapshot, 0, {}, 2, 5, {"init", "b"}),
  };
  EXPECT_TRUE(brute_force_linearizable(h, kCfg2));
  auto bad = h;
  bad[2].result = {"x", "b"};
  EXPECT_FALSE(brute_force_linearizable(bad, kCfg2));
}

TEST(BruteForce, IncompleteUpdateMayTakeEffect) {
  const History h{
      op(0, 0, CallKind::Update, 0, "a", 0, std::nullopt),
      op(1, 1, CallKind::Snapshot, 0, {}, 2, 3, {"a", "init"}),
      op(2, 1, CallKind::Snapshot, 0, {}, 4, 5, {"a", "init"}),
  };
  EXPECT_TRUE(brute_force_linearizable(h, kCfg2));
}

TEST(BruteForce, SizeCaps) {
  History h;
  for (std::uint64_t i = 0; i <= kBruteForceCompleteLimit; ++i) {
    h.push_back(op(i, 0, CallKind::Update, 0, "a", 2 * i, 2 * i + 1));
  }
  EXPECT_THROW(brute_force_linearizable(h, kCfg2), std::length_error);
}

TEST(CheckLegal, ReplaysRegisters) {
  std::vector<OpRecord> order{op(0, 0, CallKind::Update, 1, "z", 0, 1),
                              op(1, 0, CallKind::Snapshot, 0, {}, 2, 3, {"init", "z"})};
  EXPECT_TRUE(check_legal(order, kCfg2).empty());
  order[1].result = {"init", "init"};
  EXPECT_FALSE(check_legal(order, kCfg2).empty());
  std::swap(order[0], order[1]);
  EXPECT_FALSE(check_real_time(order).empty());
}

TEST(Linearize, FuzzedHistoriesAgreeWithBruteForce) {
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto run = fuzz_aso_run(seed);
    const auto& t = run.result.trace;
    const auto h = extract_history(t);
    const auto lin = linearize_by_learned_order(h, t);
    EXPECT_TRUE(lin.ok) << "seed " << seed << ": " << lin.failure;
    try {
      EXPECT_EQ(brute_force_linearizable(h, t.header.lattice()), lin.ok) << "seed " << seed;
      ++compared;
    } catch (const std::length_error&) {
    }
  }
  EXPECT_GT(compared, 50u);
}
