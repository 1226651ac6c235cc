#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "covroute/ksp.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace covroute;

namespace {

struct Ranked
{
  Seconds duration;
  std::size_t hops;
  std::vector<std::string> ids;
  std::vector<EdgeIndex> edges;
  auto operator<=>(const Ranked&) const = default;
};

Ranked rank(const RoadGraph& g, const Path& p) { return {path_duration(g, p), p.edges.size(), path_node_ids(g, p), p.edges}; }

std::vector<Ranked> brute_force(const RoadGraph& g, NodeIndex s, NodeIndex t)
{
  std::vector<Ranked> out;
  for (const auto& p : oracle::all_simple_paths(g, s, t))
    out.push_back(rank(g, p));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Ranked> drain(const RoadGraph& g, NodeIndex s, NodeIndex t)
{
  std::vector<Ranked> out;
  auto stream = open_stream(g, s, t);
  while (auto p = stream.next()) {
    EXPECT_TRUE(is_walk(g, *p));
    EXPECT_TRUE(is_simple(g, *p));
    out.push_back(rank(g, *p));
  }
  EXPECT_TRUE(stream.exhausted());
  EXPECT_FALSE(stream.next());
  return out;
}

RoadGraph diamond()
{
  RoadGraph g;
  for (auto id : {"S", "A", "B", "T"})
    g.add_node(id);
  g.add_edge(0, 1, 1, {{1, true}});
  g.add_edge(0, 2, 1, {{1, true}});
  g.add_edge(1, 3, 1, {{1, true}});
  g.add_edge(2, 3, 1, {{1, true}});
  return g;
}

} // namespace

TEST(Ksp, MatchesBruteForceOnRealDurations)
{
  gen::Rng rng(11);
  std::size_t total = 0;
  for (int trial = 0; trial < 150; ++trial) {
    gen::RandomGraphOptions opt;
    opt.multi_probability = 0;
    const auto g = gen::random_graph(rng, opt);
    const auto s = static_cast<NodeIndex>(gen::uniform_int(rng, 0, int(g.node_count()) - 1));
    const auto t = static_cast<NodeIndex>(gen::uniform_int(rng, 0, int(g.node_count()) - 1));
    const auto expected = brute_force(g, s, t);
    total += expected.size();
    ASSERT_EQ(drain(g, s, t), expected) << "trial " << trial;
  }
  EXPECT_GT(total, 1000u);
}

TEST(Ksp, MatchesBruteForceWithTies)
{
  gen::Rng rng(12);
  std::size_t total = 0;
  for (int trial = 0; trial < 150; ++trial) {
    gen::RandomGraphOptions opt;
    opt.multi_probability = 0;
    opt.integer_durations = true;
    opt.min_duration = 1;
    opt.max_duration = 4;
    const auto g = gen::random_graph(rng, opt);
    const auto t = static_cast<NodeIndex>(g.node_count() - 1);
    const auto expected = brute_force(g, 0, t);
    total += expected.size();
    ASSERT_EQ(drain(g, 0, t), expected) << "trial " << trial;
  }
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = gen::random_planar_graph(rng, 3, 3);
    const auto expected = brute_force(g, 0, 8);
    total += expected.size();
    ASSERT_EQ(drain(g, 0, 8), expected) << "planar trial " << trial;
  }
  EXPECT_GT(total, 1000u);
}

TEST(Ksp, DiamondTieBreaksOnNodeIds)
{
  const auto g = diamond();
  auto stream = open_stream(g, "S", "T");
  auto first = stream.next();
  auto second = stream.next();
  ASSERT_TRUE(first && second);
  EXPECT_EQ(path_node_ids(g, *first), (std::vector<std::string>{"S", "A", "T"}));
  EXPECT_EQ(path_node_ids(g, *second), (std::vector<std::string>{"S", "B", "T"}));
  EXPECT_FALSE(stream.next());
  EXPECT_EQ(stream.yielded(), 2u);
}

TEST(Ksp, ParallelEdgesAreDistinctPaths)
{
  RoadGraph g;
  g.add_node("A");
  g.add_node("B");
  g.add_edge(0, 1, 5, {{1, true}});
  g.add_edge(0, 1, 5, {{1, false}});
  g.add_edge(0, 1, 3, {{1, true}});
  const auto paths = drain(g, 0, 1);
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(paths[0].edges, std::vector<EdgeIndex>{2});
  EXPECT_EQ(paths[1].edges, std::vector<EdgeIndex>{0});
  EXPECT_EQ(paths[2].edges, std::vector<EdgeIndex>{1});
}

TEST(Ksp, SourceEqualsTargetAndUnreachable)
{
  const auto g = diamond();
  const auto self = shortest_path(g, "A", "A");
  ASSERT_TRUE(self);
  EXPECT_TRUE(self->edges.empty());
  EXPECT_EQ(path_duration(g, *self), 0);
  EXPECT_FALSE(shortest_path(g, "T", "S"));
  auto stream = open_stream(g, "T", "S");
  EXPECT_FALSE(stream.next());
  EXPECT_TRUE(stream.exhausted());
  EXPECT_THROW(shortest_path(g, "S", "nope"), UnknownNode);
}

TEST(Ksp, UniformWeightsPickTwoHopPath)
{
  RoadGraph g;
  for (auto id : {"A", "B", "C", "D", "E", "F", "G"})
    g.add_node(id);
  const std::pair<int, int> links[] = {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {3, 2}, {2, 5}, {3, 5}, {3, 6}, {4, 6}, {6, 5}};
  for (auto [a, b] : links)
    g.add_edge(a, b, 1, {{1, true}});
  const auto p = shortest_path(g, "A", "F");
  ASSERT_TRUE(p);
  EXPECT_EQ(path_duration(g, *p), 2);
  EXPECT_EQ(path_node_ids(g, *p), (std::vector<std::string>{"A", "C", "F"}));
}

TEST(Ksp, Deterministic)
{
  gen::Rng rng(99);
  const auto g = gen::random_planar_graph(rng, 6, 5);
  auto a = open_stream(g, 0, 35);
  auto b = open_stream(g, 0, 35);
  for (int i = 0; i < 200; ++i) {
    auto pa = a.next();
    auto pb = b.next();
    ASSERT_EQ(pa.has_value(), pb.has_value());
    if (!pa)
      break;
    EXPECT_EQ(pa->edges, pb->edges);
  }
}

TEST(Ksp, NondecreasingDurationsOnLargerGraph)
{
  gen::Rng rng(5);
  const auto g = gen::random_planar_graph(rng, 12, 20);
  auto stream = open_stream(g, 0, 143);
  std::set<std::vector<EdgeIndex>> seen;
  Seconds last = 0;
  const PathOrder order(g);
  std::optional<Path> prev;
  for (int i = 0; i < 500; ++i) {
    auto p = stream.next();
    ASSERT_TRUE(p);
    const Seconds d = path_duration(g, *p);
    EXPECT_GE(d, last);
    if (prev) {
      EXPECT_TRUE(order.less(path_duration(g, *prev), *prev, d, *p));
    }
    EXPECT_TRUE(seen.insert(p->edges).second);
    EXPECT_TRUE(is_simple(g, *p));
    last = d;
    prev = p;
  }
}
