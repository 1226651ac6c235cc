#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covroute/types.hpp"

namespace covroute {

struct GeoPoint
{
  double lat = 0;
  double lon = 0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Node
{
  std::string id;
  std::optional<GeoPoint> position; // display only
};

/// A share of an edge's duration with a binary coverage flag.
struct CoverageSegment
{
  double fraction = 1.0;
  bool covered = true;
  friend bool operator==(const CoverageSegment&, const CoverageSegment&) = default;
};

/// Directed road edge. Segments are ordered from `from` toward `to`.
struct Edge
{
  NodeIndex from = 0;
  NodeIndex to = 0;
  Seconds duration = 0;
  std::vector<CoverageSegment> segments;

  Seconds segment_duration(std::size_t i) const { return duration * segments[i].fraction; }
};

enum class LabelForm
{
  multi,
  single
};

/// Validates segment fractions, merges adjacent same-flag runs and rescales
/// the fractions so they sum to one.
inline std::vector<CoverageSegment> normalize_segments(std::vector<CoverageSegment> segments)
{
  if (segments.empty())
    throw GraphError("empty segment list");
  double sum = 0;
  for (const auto& s : segments) {
    if (!std::isfinite(s.fraction) || s.fraction <= 0)
      throw GraphError("segment fraction must be positive");
    sum += s.fraction;
  }

  std::vector<CoverageSegment> merged;
  merged.reserve(segments.size());
  for (const auto& s : segments) {
    if (!merged.empty() && merged.back().covered == s.covered)
      merged.back().fraction += s.fraction;
    else
      merged.push_back(s);
  }
  if (merged.size() == 1) {
    merged.front().fraction = 1.0;
    return merged;
  }
  for (auto& s : merged)
    s.fraction /= sum;
  return merged;
}

/// Directed multigraph of intersections and road edges. Immutable once built
/// and shared read-only by every algorithm.
class RoadGraph
{
public:
  NodeIndex add_node(std::string id, std::optional<GeoPoint> position = std::nullopt)
  {
    if (id.empty())
      throw GraphError("node id must not be empty");
    const auto index = static_cast<NodeIndex>(nodes_.size());
    if (!index_.emplace(id, index).second)
      throw GraphError("duplicate node id '" + id + "'");
    nodes_.push_back(Node{std::move(id), position});
    out_.emplace_back();
    in_.emplace_back();
    return index;
  }

  EdgeIndex add_edge(NodeIndex from, NodeIndex to, Seconds duration,
                     std::vector<CoverageSegment> segments = {{1.0, true}})
  {
    if (from >= nodes_.size() || to >= nodes_.size())
      throw GraphError("dangling endpoint");
    if (!std::isfinite(duration) || duration <= 0)
      throw GraphError("nonpositive duration on edge " + nodes_[from].id + "->" + nodes_[to].id);
    const auto index = static_cast<EdgeIndex>(edges_.size());
    edges_.push_back(Edge{from, to, duration, normalize_segments(std::move(segments))});
    if (edges_.back().segments.size() > 1)
      ++multi_segment_edges_;
    out_[from].push_back(index);
    in_[to].push_back(index);
    return index;
  }

  void set_segments(EdgeIndex e, std::vector<CoverageSegment> segments)
  {
    auto& edge = edges_.at(e);
    auto normalized = normalize_segments(std::move(segments));
    multi_segment_edges_ -= edge.segments.size() > 1 ? 1 : 0;
    multi_segment_edges_ += normalized.size() > 1 ? 1 : 0;
    edge.segments = std::move(normalized);
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Node& node(NodeIndex n) const { return nodes_[n]; }
  const std::string& id(NodeIndex n) const { return nodes_[n].id; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const EdgeIndex> out_edges(NodeIndex n) const { return out_[n]; }
  std::span<const EdgeIndex> in_edges(NodeIndex n) const { return in_[n]; }

  std::optional<NodeIndex> find_node(std::string_view id) const
  {
    auto it = index_.find(id);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  NodeIndex node_index(std::string_view id) const
  {
    if (auto n = find_node(id))
      return *n;
    throw UnknownNode(std::string(id));
  }

  /// First edge from -> to in insertion order.
  std::optional<EdgeIndex> find_edge(NodeIndex from, NodeIndex to) const
  {
    for (EdgeIndex e : out_[from])
      if (edges_[e].to == to)
        return e;
    return std::nullopt;
  }

  LabelForm label_form() const noexcept
  {
    return multi_segment_edges_ == 0 ? LabelForm::single : LabelForm::multi;
  }

private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::map<std::string, NodeIndex, std::less<>> index_;
  std::size_t multi_segment_edges_ = 0;
};

/// A walk stored as edges so parallel roads stay distinguishable. The origin
/// is kept so the empty path still names its node.
struct Path
{
  NodeIndex origin = 0;
  std::vector<EdgeIndex> edges;

  bool empty() const noexcept { return edges.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
};

inline NodeIndex path_end(const RoadGraph& g, const Path& p)
{
  return p.edges.empty() ? p.origin : g.edge(p.edges.back()).to;
}

inline std::vector<NodeIndex> path_nodes(const RoadGraph& g, const Path& p)
{
  std::vector<NodeIndex> nodes;
  nodes.reserve(p.edges.size() + 1);
  nodes.push_back(p.origin);
  for (EdgeIndex e : p.edges)
    nodes.push_back(g.edge(e).to);
  return nodes;
}

inline std::vector<std::string> path_node_ids(const RoadGraph& g, const Path& p)
{
  std::vector<std::string> ids;
  for (NodeIndex n : path_nodes(g, p))
    ids.push_back(g.id(n));
  return ids;
}

/// Left fold over every segment's share of duration, in travel order. Using
/// the segment granularity makes a path and its partitioned image sum the
/// same floating-point terms in the same order.
inline Seconds path_duration(const RoadGraph& g, const Path& p)
{
  Seconds total = 0;
  for (EdgeIndex e : p.edges) {
    const auto& edge = g.edge(e);
    for (std::size_t i = 0; i < edge.segments.size(); ++i)
      total += edge.segment_duration(i);
  }
  return total;
}

inline bool is_walk(const RoadGraph& g, const Path& p)
{
  NodeIndex at = p.origin;
  for (EdgeIndex e : p.edges) {
    if (e >= g.edge_count() || g.edge(e).from != at)
      return false;
    at = g.edge(e).to;
  }
  return true;
}

inline bool is_simple(const RoadGraph& g, const Path& p)
{
  auto nodes = path_nodes(g, p);
  std::sort(nodes.begin(), nodes.end());
  return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

struct CoverageRun
{
  bool covered = true;
  Seconds duration = 0;
  friend bool operator==(const CoverageRun&, const CoverageRun&) = default;
};

/// Maximal same-flag stretches of travel time along `p`; runs continue
/// across edge boundaries.
inline std::vector<CoverageRun> coverage_runs(const RoadGraph& g, const Path& p)
{
  std::vector<CoverageRun> runs;
  for (EdgeIndex e : p.edges) {
    const auto& edge = g.edge(e);
    for (std::size_t i = 0; i < edge.segments.size(); ++i) {
      const bool covered = edge.segments[i].covered;
      if (!runs.empty() && runs.back().covered == covered)
        runs.back().duration += edge.segment_duration(i);
      else
        runs.push_back({covered, edge.segment_duration(i)});
    }
  }
  return runs;
}

} // namespace covroute
