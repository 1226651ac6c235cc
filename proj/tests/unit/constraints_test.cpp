#include <gtest/gtest.h>

#include "covroute/constraints.hpp"
#include "covroute/transform.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace covroute;

namespace {

// A -> B -> C -> D with uncovered stretches that meet at B and C.
RoadGraph chain()
{
  RoadGraph g;
  for (auto id : {"A", "B", "C", "D"})
    g.add_node(id);
  g.add_edge(0, 1, 100, {{0.7, true}, {0.3, false}}); // 30 uncovered at the end
  g.add_edge(1, 2, 40, {{1.0, false}});                // 40
  g.add_edge(2, 3, 200, {{0.1, false}, {0.9, true}}); // 20
  return g;
}

} // namespace

TEST(Budget, Semantics)
{
  EXPECT_TRUE(Budget::unbounded().admits(1e300));
  EXPECT_TRUE(Budget::of(5).admits(5));
  EXPECT_FALSE(Budget::of(5).admits(5.0000001));
  EXPECT_THROW(Budget::of(-1), std::invalid_argument);
  EXPECT_THROW(Budget::of(std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_TRUE(Budget::of(3) < Budget::unbounded());
  EXPECT_EQ(Budget::of(4).scaled(2.5), Budget::of(10));
  EXPECT_TRUE(Budget::unbounded().scaled(2).is_unbounded());
}

TEST(Constraints, BreakageMergesAcrossBoundaries)
{
  const auto g = chain();
  const Path p{0, {0, 1, 2}};
  EXPECT_DOUBLE_EQ(breakage_total(g, p), 90);
  EXPECT_DOUBLE_EQ(breakage_max_run(g, p), 90);
  EXPECT_TRUE(within_run_budget(g, p, Budget::of(90)));
  EXPECT_FALSE(within_run_budget(g, p, Budget::of(89)));
  EXPECT_TRUE(within_total_budget(g, p, Budget::of(90)));
  EXPECT_FALSE(within_total_budget(g, p, Budget::of(50)));
  const Path first{0, {0}};
  EXPECT_DOUBLE_EQ(breakage_max_run(g, first), 30);
}

TEST(Constraints, EmptyPathHasNoBreakage)
{
  const auto g = chain();
  const Path p{2, {}};
  EXPECT_EQ(breakage_total(g, p), 0);
  EXPECT_EQ(breakage_max_run(g, p), 0);
}

TEST(Constraints, WindowScanAgreement)
{
  gen::Rng rng(404);
  int checked = 0;
  while (checked < 1000) {
    gen::RandomGraphOptions opt;
    opt.multi_probability = 0.8;
    opt.covered_probability = 0.4;
    const auto g = gen::random_graph(rng, opt);
    for (const auto& p : oracle::all_simple_paths(g, 0, static_cast<NodeIndex>(g.node_count() - 1))) {
      const auto pieces = oracle::pieces(g, p);
      EXPECT_EQ(breakage_max_run(g, p), oracle::window_scan_max_run(pieces));
      EXPECT_EQ(breakage_total(g, p), oracle::breakage(pieces));
      if (++checked == 1000)
        break;
    }
  }
}

TEST(Constraints, RelaxationSchedule)
{
  RelaxationPolicy pol{2.0, Budget::of(1000)};
  auto s = relaxation_schedule(Budget::of(100), pol);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], Budget::of(100));
  EXPECT_EQ(s[3], Budget::of(800));
  pol.ceiling = Budget::of(800);
  EXPECT_EQ(relaxation_schedule(Budget::of(100), pol).size(), 4u); // ceiling inclusive
  EXPECT_EQ(relaxation_schedule(Budget::of(0), pol).size(), 1u);
  EXPECT_EQ(relaxation_schedule(Budget::unbounded(), RelaxationPolicy{}).size(), 1u);
  EXPECT_THROW(relaxation_schedule(Budget::of(100), RelaxationPolicy{1.0, Budget::of(500)}), std::invalid_argument);
  EXPECT_THROW(relaxation_schedule(Budget::of(100), RelaxationPolicy{1.5, Budget::of(50)}), std::invalid_argument);
  EXPECT_THROW(relaxation_schedule(Budget::of(100), RelaxationPolicy{1.5, Budget::unbounded()}),
               std::invalid_argument);
}

TEST(Constraints, SweepGrid)
{
  const SweepPolicy pol{0.5, 2.0, 3};
  const auto grid = pol.grid(Budget::of(100));
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_EQ(grid[0], Budget::of(50));
  EXPECT_EQ(grid[1], Budget::of(125));
  EXPECT_EQ(grid[2], Budget::of(200));
  const auto single = SweepPolicy{1.0, 1.0, 1}.grid(Budget::of(70));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], Budget::of(70));
  EXPECT_THROW((SweepPolicy{0.0, 1.0, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((SweepPolicy{2.0, 1.0, 2}.validate()), std::invalid_argument);
  EXPECT_THROW((SweepPolicy{1.0, 1.0, 0}.validate()), std::invalid_argument);
  for (auto b : SweepPolicy{0.5, 2.0, 4}.grid(Budget::unbounded()))
    EXPECT_TRUE(b.is_unbounded());
}

TEST(Constraints, DegenerateSweepEqualsCollect)
{
  gen::Rng rng(3);
  const auto g = gen::random_planar_graph(rng, 4, 9);
  const Requirements req{Budget::of(12), Budget::of(6)};
  auto stream = open_stream(g, 0, 15);
  const auto direct = collect_candidates(stream, req, 5);
  const auto m = sweep(g, 0, 15, req.d1, req.d2, 5, SweepPolicy{});
  ASSERT_EQ(m.rows.size(), 1u);
  ASSERT_EQ(m.rows[0].paths.size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    EXPECT_EQ(m.rows[0].paths[i].edges, direct[i].edges);
}

TEST(Constraints, CollectRespectsBudgetsAndOrder)
{
  gen::Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    gen::RandomGraphOptions opt;
    opt.multi_probability = 0;
    const auto g = gen::random_graph(rng, opt);
    const auto t = static_cast<NodeIndex>(g.node_count() - 1);
    const Requirements req{Budget::of(gen::uniform(rng, 0, 600)), Budget::of(gen::uniform(rng, 0, 400))};
    std::vector<oracle::Scored> all;
    for (const auto& p : oracle::all_simple_paths(g, 0, t))
      all.push_back(oracle::score_path(g, p));
    auto expected = oracle::valid_sorted(all, req.d1, req.d2);
    const std::size_t k = 4;
    if (expected.size() > k)
      expected.resize(k);
    CandidatePool pool(g, 0, t);
    const auto got = collect_candidates(pool, req, k);
    ASSERT_EQ(got.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_EQ(got[i].edges, expected[i].path.edges);
  }
}

TEST(Constraints, RelaxationStatuses)
{
  // S -> T direct: 100 s, 60 uncovered. S -> M -> T: 300 s, all covered.
  RoadGraph g;
  for (auto id : {"S", "M", "T"})
    g.add_node(id);
  g.add_edge(0, 2, 100, {{0.4, true}, {0.6, false}});
  g.add_edge(0, 1, 150, {{1, true}});
  g.add_edge(1, 2, 150, {{1, true}});

  auto run = [&](Budget d1, Budget d2, Budget ceiling, std::size_t k) {
    return relax_until_found(g, 0, 2, Requirements{d1, d2}, k, RelaxationPolicy{2.0, ceiling});
  };
  auto found = run(Budget::of(60), Budget::unbounded(), Budget::of(240), 2);
  EXPECT_EQ(found.status, RelaxStatus::found);
  EXPECT_EQ(found.effective_d1, Budget::of(60));
  EXPECT_EQ(found.paths.size(), 2u);

  auto partial = run(Budget::of(10), Budget::unbounded(), Budget::of(40), 2);
  EXPECT_EQ(partial.status, RelaxStatus::partial);
  EXPECT_EQ(partial.paths.size(), 1u);

  // Remove the covered detour: only the direct road remains.
  RoadGraph direct;
  direct.add_node("S");
  direct.add_node("T");
  direct.add_edge(0, 1, 100, {{0.4, true}, {0.6, false}});
  auto relaxed = relax_until_found(direct, 0, 1, Requirements{Budget::of(20), Budget::unbounded()}, 1,
                                   RelaxationPolicy{2.0, Budget::of(80)});
  EXPECT_EQ(relaxed.status, RelaxStatus::found);
  EXPECT_EQ(relaxed.effective_d1, Budget::of(80));
  auto best = relax_until_found(direct, 0, 1, Requirements{Budget::of(20), Budget::unbounded()}, 1,
                                RelaxationPolicy{2.0, Budget::of(50)});
  EXPECT_EQ(best.status, RelaxStatus::best_effort);
  ASSERT_EQ(best.paths.size(), 1u);
  auto none = relax_until_found(direct, 1, 0, Requirements{}, 1, RelaxationPolicy{});
  EXPECT_EQ(none.status, RelaxStatus::unreachable);
  EXPECT_TRUE(none.paths.empty());
}
