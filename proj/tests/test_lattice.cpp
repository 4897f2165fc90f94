#include <gtest/gtest.h>

#include <map>

#include "lasnap/json_io.hpp"
#include "lasnap/lattice.hpp"
#include "small_domain.hpp"

using namespace lasnap;

namespace {

AsoVector vec(std::vector<RegisterCell> cells, std::vector<std::uint64_t> counters) {
  return AsoVector(std::move(cells), std::move(counters));
}

const LatticeConfig kCfg2{2, 2, ""};

}  // namespace

TEST(CellLeq, Examples) {
  EXPECT_TRUE(cell_leq({1, "a"}, {2, "b"}));
  EXPECT_TRUE(cell_leq({3, "x"}, {3, "x"}));
  EXPECT_FALSE(cell_leq({2, "b"}, {2, "a"}));
}

TEST(CellLeq, MatchesSortOverThreeSymbolAlphabet) {
  std::vector<RegisterCell> cells{{0, ""}};
  for (std::uint64_t w = 1; w <= 3; ++w) {
    for (const char* v : {"c", "a", "b"}) cells.push_back({w, v});
  }
  auto sorted = cells;
  std::sort(sorted.begin(), sorted.end(), [](const RegisterCell& x, const RegisterCell& y) {
    return std::tie(x.writes, x.value) < std::tie(y.writes, y.value);
  });
  std::map<std::pair<std::uint64_t, std::string>, std::size_t> rank;
  for (std::size_t i = 0; i < sorted.size(); ++i) rank[{sorted[i].writes, sorted[i].value}] = i;
  for (const auto& a : cells) {
    for (const auto& b : cells) {
      const auto ra = rank[{a.writes, a.value}];
      const auto rb = rank[{b.writes, b.value}];
      EXPECT_EQ(cell_leq(a, b), ra <= rb);
    }
  }
}

TEST(CellLeq, IsTotalOrder) {
  const auto cells = small_domain::cells();
  for (const auto& a : cells) {
    for (const auto& b : cells) {
      EXPECT_TRUE(cell_leq(a, b) || cell_leq(b, a));
      if (cell_leq(a, b) && cell_leq(b, a)) {
        EXPECT_EQ(a, b);
      }
      for (const auto& c : cells) {
        if (cell_leq(a, b) && cell_leq(b, c)) {
          EXPECT_TRUE(cell_leq(a, c));
        }
      }
    }
  }
}

TEST(CellLeq, PluggablePayloadOrder) {
  auto reversed = [](std::string_view a, std::string_view b) { return b < a; };
  EXPECT_TRUE(cell_leq({2, "b"}, {2, "a"}, reversed));
  EXPECT_FALSE(cell_leq({2, "a"}, {2, "b"}, reversed));
}

TEST(Leq, Examples) {
  const auto bot = AsoVector::bottom(kCfg2);
  for (const auto& x : small_domain::vectors()) EXPECT_TRUE(leq(bot, x));
  EXPECT_TRUE(leq(vec({{1, "a"}, {0, ""}}, {0, 0}), vec({{1, "a"}, {2, "b"}}, {1, 0})));
  EXPECT_FALSE(leq(vec({{2, "a"}, {0, ""}}, {0, 0}), vec({{1, "b"}, {5, "z"}}, {9, 9})));
}

TEST(Leq, DimensionMismatch) {
  EXPECT_THROW(leq(AsoVector::bottom({2, 2, ""}), AsoVector::bottom({3, 2, ""})), DimensionMismatch);
  EXPECT_THROW(join(AsoVector::bottom({2, 2, ""}), AsoVector::bottom({2, 3, ""})), DimensionMismatch);
  EXPECT_THROW(comparable(AsoVector::bottom({1, 1, ""}), AsoVector::bottom({2, 2, ""})), DimensionMismatch);
}

TEST(Join, Examples) {
  const LatticeConfig cfg{1, 1, ""};
  const auto x = vec({{2, "q"}}, {1});
  EXPECT_EQ(join(x, AsoVector::bottom(cfg)), x);
  EXPECT_EQ(join(vec({{1, "a"}}, {0}), vec({{1, "b"}}, {2})), vec({{1, "b"}}, {2}));
}

TEST(Comparable, Examples) {
  const auto x = vec({{1, "a"}, {0, ""}}, {0, 0});
  EXPECT_TRUE(comparable(x, x));
  EXPECT_FALSE(comparable(x, vec({{0, ""}, {1, "b"}}, {0, 0})));
  EXPECT_TRUE(comparable(AsoVector::bottom(kCfg2), x));
}

TEST(Markers, UpdateAndSnapshotVectors) {
  EXPECT_EQ(make_update_vector(kCfg2, 0, 1, "a"), vec({{1, "a"}, {0, ""}}, {0, 0}));
  EXPECT_EQ(make_update_vector(kCfg2, 1, 3, "z"), vec({{0, ""}, {3, "z"}}, {0, 0}));
  EXPECT_THROW(make_update_vector(kCfg2, 0, 0, "a"), std::invalid_argument);
  EXPECT_THROW(make_update_vector(kCfg2, 2, 1, "a"), std::out_of_range);
  EXPECT_EQ(make_snapshot_vector(kCfg2, 0, 1), vec({{0, ""}, {0, ""}}, {1, 0}));
  EXPECT_EQ(make_snapshot_vector(kCfg2, 1, 2), vec({{0, ""}, {0, ""}}, {0, 2}));
  EXPECT_THROW(make_snapshot_vector(kCfg2, 2, 1), std::out_of_range);

  const auto s = make_snapshot_vector(kCfg2, 0, 1);
  const auto u = make_update_vector(kCfg2, 0, 1, "v");
  const auto both = join(s, u);
  EXPECT_TRUE(leq(s, both));
  EXPECT_TRUE(leq(u, both));
}

TEST(ProjectRegisters, Examples) {
  EXPECT_EQ(project_registers(AsoVector::bottom({2, 2, "init"})), (std::vector<std::string>{"init", "init"}));
  EXPECT_EQ(project_registers(vec({{1, "a"}, {2, "b"}}, {3, 0})), (std::vector<std::string>{"a", "b"}));
}

TEST(ProjectRegisters, JoinProjectsToCellwiseMax) {
  const auto dom = small_domain::vectors();
  for (std::size_t a = 0; a < dom.size(); a += 7) {
    for (std::size_t b = 0; b < dom.size(); b += 5) {
      const auto p = project_registers(join(dom[a], dom[b]));
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& x = dom[a].cell(i);
        const auto& y = dom[b].cell(i);
        EXPECT_EQ(p[i], small_domain::oracle_cell_leq(x, y) ? y.value : x.value);
      }
    }
  }
}

TEST(Lattice, SmallDomainLaws) {
  const auto dom = small_domain::vectors();
  ASSERT_EQ(dom.size(), 225u);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dom.size(); ++i) index[dom[i].canonical()] = i;

  std::vector<std::vector<std::size_t>> j(dom.size(), std::vector<std::size_t>(dom.size()));
  for (std::size_t a = 0; a < dom.size(); ++a) {
    for (std::size_t b = 0; b < dom.size(); ++b) {
      ASSERT_EQ(leq(dom[a], dom[b]), small_domain::oracle_leq(dom[a], dom[b]));
      const auto it = index.find(join(dom[a], dom[b]).canonical());
      ASSERT_NE(it, index.end()) << "join leaves the domain";
      j[a][b] = it->second;
    }
  }
  for (std::size_t a = 0; a < dom.size(); ++a) {
    EXPECT_EQ(j[a][a], a);
    for (std::size_t b = 0; b < dom.size(); ++b) {
      EXPECT_EQ(j[a][b], j[b][a]);
      EXPECT_EQ(leq(dom[a], dom[b]), j[a][b] == b);
      for (std::size_t c = 0; c < dom.size(); c += 3) EXPECT_EQ(j[j[a][b]][c], j[a][j[b][c]]);
    }
  }
  for (std::size_t a = 0; a < dom.size(); a += 4) {
    for (std::size_t b = 0; b < dom.size(); b += 3) {
      EXPECT_EQ(j[a][b], small_domain::oracle_lub(dom, a, b));
    }
  }
}

TEST(Canonical, RoundTripAndDeterminism) {
  for (const auto& x : small_domain::vectors()) {
    EXPECT_EQ(AsoVector::from_canonical(x.canonical()), x);
  }
  const auto a = vec({{1, "a"}, {0, ""}}, {0, 0});
  EXPECT_EQ(a.canonical(), vec({{1, "a"}, {0, ""}}, {0, 0}).canonical());
  EXPECT_EQ(static_cast<std::uint8_t>(a.canonical()[0]), kCanonicalVersion);
  EXPECT_THROW(AsoVector::from_canonical(""), std::invalid_argument);
  EXPECT_THROW(AsoVector::from_canonical(a.canonical() + "x"), std::invalid_argument);
}

TEST(Json, RoundTrip) {
  for (const auto& x : small_domain::vectors()) EXPECT_EQ(vector_from_json(vector_to_json(x)), x);
}

TEST(Config, Validation) {
  EXPECT_THROW(AsoVector::bottom({0, 1, ""}), std::invalid_argument);
  EXPECT_THROW(AsoVector::bottom({1, 0, ""}), std::invalid_argument);
  const auto sq = LatticeConfig::square(3, "z");
  EXPECT_EQ(sq.m, 3u);
  EXPECT_EQ(sq.n, 3u);
  EXPECT_TRUE(AsoVector::bottom(sq).is_bottom());
  EXPECT_EQ(AsoVector::bottom(sq).cell(2).value, "z");
}
