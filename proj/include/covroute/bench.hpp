#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "covroute/graph.hpp"
#include "covroute/planner.hpp"

namespace covroute {

namespace detail {

class DisjointSets
{
public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x)
  {
    while (parent_[x] != x)
      x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    parent_[a] = b;
    return true;
  }

private:
  std::vector<std::size_t> parent_;
};

struct Point
{
  double x, y;
};

inline double dist2(Point a, Point b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); }

/// Uniform bucket grid over the unit square.
class PointGrid
{
public:
  PointGrid(std::span<const Point> pts, std::size_t per_cell = 2) : pts_(pts)
  {
    side_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(pts.size() / double(per_cell))));
    cells_.resize(side_ * side_);
    for (std::size_t i = 0; i < pts.size(); ++i)
      cells_[cell(pts[i].x) * side_ + cell(pts[i].y)].push_back(i);
  }

  std::size_t cell(double v) const { return std::min(side_ - 1, static_cast<std::size_t>(v * side_)); }

  template <class Fn>
  void visit_box(double x0, double y0, double x1, double y1, Fn&& fn) const
  {
    for (std::size_t cx = cell(std::max(0.0, x0)); cx <= cell(std::min(1.0, x1)); ++cx)
      for (std::size_t cy = cell(std::max(0.0, y0)); cy <= cell(std::min(1.0, y1)); ++cy)
        for (std::size_t i : cells_[cx * side_ + cy])
          fn(i);
  }

  /// Indices of up to `k` nearest neighbours of point i.
  std::vector<std::size_t> nearest(std::size_t i, std::size_t k) const
  {
    double r = 1.5 / side_;
    while (true) {
      std::vector<std::pair<double, std::size_t>> found;
      const Point p = pts_[i];
      visit_box(p.x - r, p.y - r, p.x + r, p.y + r, [&](std::size_t j) {
        if (j != i && dist2(p, pts_[j]) <= r * r)
          found.push_back({dist2(p, pts_[j]), j});
      });
      if (found.size() >= k || r > 2.0) {
        std::sort(found.begin(), found.end());
        found.resize(std::min(found.size(), k));
        std::vector<std::size_t> out;
        for (auto& f : found)
          out.push_back(f.second);
        return out;
      }
      r *= 2;
    }
  }

private:
  std::span<const Point> pts_;
  std::size_t side_ = 1;
  std::vector<std::vector<std::size_t>> cells_;
};

} // namespace detail

/// Seeded random planar road network. Points are uniform in the unit square;
/// roads come from the Gabriel graph (a planar subgraph of the Delaunay
/// triangulation): its Euclidean spanning tree first, for connectivity, then
/// the shortest remaining Gabriel edges until `directed_edges / 2` roads
/// exist. Each road becomes two directed edges with duration scaled linearly
/// from length into [30 s, 600 s] and an independent Bernoulli coverage flag
/// per direction.
inline RoadGraph random_planar_road_graph(std::size_t nodes, std::size_t directed_edges, std::uint64_t seed,
                                          double covered_probability = 0.7)
{
  if (nodes < 2)
    throw std::invalid_argument("need at least two nodes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<detail::Point> pts(nodes);
  for (auto& p : pts)
    p = {unit(rng), unit(rng)};
  detail::PointGrid grid(pts);

  struct Road
  {
    double length2;
    std::size_t a, b;
  };
  std::vector<Road> gabriel;
  const std::size_t neighbours = std::min<std::size_t>(12, nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j : grid.nearest(i, neighbours)) {
      const detail::Point m{(pts[i].x + pts[j].x) / 2, (pts[i].y + pts[j].y) / 2};
      const double r2 = detail::dist2(pts[i], pts[j]) / 4;
      const double r = std::sqrt(r2);
      bool empty = true;
      grid.visit_box(m.x - r, m.y - r, m.x + r, m.y + r, [&](std::size_t w) {
        if (w != i && w != j && detail::dist2(pts[w], m) < r2)
          empty = false;
      });
      if (empty)
        gabriel.push_back({detail::dist2(pts[i], pts[j]), std::min(i, j), std::max(i, j)});
    }
  }
  std::sort(gabriel.begin(), gabriel.end(),
            [](const Road& x, const Road& y) { return std::tie(x.length2, x.a, x.b) < std::tie(y.length2, y.a, y.b); });
  gabriel.erase(std::unique(gabriel.begin(), gabriel.end(),
                            [](const Road& x, const Road& y) { return x.a == y.a && x.b == y.b; }),
                gabriel.end());

  std::vector<char> used(gabriel.size(), 0);
  std::vector<std::size_t> chosen;
  detail::DisjointSets sets(nodes);
  for (std::size_t i = 0; i < gabriel.size(); ++i)
    if (sets.unite(gabriel[i].a, gabriel[i].b)) {
      used[i] = 1;
      chosen.push_back(i);
    }
  const std::size_t want = std::max(chosen.size(), directed_edges / 2);
  for (std::size_t i = 0; i < gabriel.size() && chosen.size() < want; ++i)
    if (!used[i]) {
      used[i] = 1;
      chosen.push_back(i);
    }
  std::sort(chosen.begin(), chosen.end());

  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (std::size_t i : chosen) {
    lo = std::min(lo, std::sqrt(gabriel[i].length2));
    hi = std::max(hi, std::sqrt(gabriel[i].length2));
  }

  RoadGraph g;
  for (std::size_t i = 0; i < nodes; ++i)
    g.add_node("n" + std::to_string(i), GeoPoint{pts[i].y, pts[i].x});
  std::bernoulli_distribution covered(covered_probability);
  for (std::size_t i : chosen) {
    const double len = std::sqrt(gabriel[i].length2);
    const double duration = hi > lo ? 30.0 + (len - lo) / (hi - lo) * 570.0 : 30.0;
    const auto a = static_cast<NodeIndex>(gabriel[i].a);
    const auto b = static_cast<NodeIndex>(gabriel[i].b);
    g.add_edge(a, b, duration, {{1.0, covered(rng)}});
    g.add_edge(b, a, duration, {{1.0, covered(rng)}});
  }
  return g;
}

struct BenchRow
{
  std::size_t k = 0;
  std::size_t reps = 0;
  double mean_ms = 0;
  double min_ms = 0;
  double max_ms = 0;
  double mean_paths = 0; // candidates in the final matrix
};

/// Times plan() for each k over the same seeded source/target pairs, with
/// unbounded budgets and unit relaxation/sweep factors so every enumerated
/// path is a candidate.
inline std::vector<BenchRow> run_bench(const RoadGraph& g, std::span<const std::size_t> k_list, std::size_t reps,
                                       std::uint64_t seed)
{
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<NodeIndex> pick(0, static_cast<NodeIndex>(g.node_count() - 1));
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  while (pairs.size() < reps) {
    const NodeIndex s = pick(rng), t = pick(rng);
    if (s != t)
      pairs.push_back({s, t});
  }

  std::vector<BenchRow> rows;
  for (std::size_t k : k_list) {
    PlannerConfig cfg;
    cfg.alpha = Alpha(1.0);
    cfg.k = k;
    cfg.relaxation.growth = 1.2; // unused: unbounded D1 never relaxes
    cfg.scan_limit = std::max(cfg.scan_limit, k);
    BenchRow row;
    row.k = k;
    row.reps = reps;
    row.min_ms = std::numeric_limits<double>::infinity();
    double total = 0;
    for (const auto& [s, t] : pairs) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto result = plan(g, s, t, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      total += ms;
      row.min_ms = std::min(row.min_ms, ms);
      row.max_ms = std::max(row.max_ms, ms);
      for (const auto& r : result.matrix.rows)
        row.mean_paths += static_cast<double>(r.paths.size());
    }
    row.mean_ms = reps ? total / reps : 0;
    row.mean_paths = reps ? row.mean_paths / reps : 0;
    rows.push_back(row);
  }
  return rows;
}

} // namespace covroute
