#pragma once

#include <cassert>
#include <string>
#include <vector>

#include "covroute/graph.hpp"

namespace covroute {

/// Where a partitioned edge came from: segment `segment` of `segment_count`
/// on original edge `edge`.
struct EdgeOrigin
{
  EdgeIndex edge = 0;
  std::uint32_t segment = 0;
  std::uint32_t segment_count = 1;
};

/// A singly-labelled graph plus a map from each of its edges back to the
/// original multi-labelled edges. Original nodes keep their indices; synthetic
/// nodes are appended after them.
struct TransformedGraph
{
  RoadGraph graph;
  std::vector<EdgeOrigin> origin;
  std::size_t original_node_count = 0;
};

/// Synthetic node between segment `segment` and `segment + 1` of an edge.
/// `parallel_ordinal` counts earlier edges with the same endpoints.
inline std::string synthetic_node_id(const std::string& from, const std::string& to,
                                     std::size_t parallel_ordinal, std::size_t segment)
{
  std::string id = from + ">" + to;
  if (parallel_ordinal > 0)
    id += "/" + std::to_string(parallel_ordinal);
  return id + "@" + std::to_string(segment + 1);
}

/// Splits every multi-segment edge into a chain of single-segment edges
/// joined by synthetic nodes. Single-segment edges pass through unchanged.
inline TransformedGraph transform_graph(const RoadGraph& g)
{
  TransformedGraph out;
  out.original_node_count = g.node_count();
  for (const auto& n : g.nodes())
    out.graph.add_node(n.id, n.position);

  std::map<std::pair<NodeIndex, NodeIndex>, std::size_t> parallel_seen;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    const auto count = static_cast<std::uint32_t>(edge.segments.size());
    const std::size_t ordinal = parallel_seen[{edge.from, edge.to}]++;
    if (count == 1) {
      out.graph.add_edge(edge.from, edge.to, edge.duration, {{1.0, edge.segments[0].covered}});
      out.origin.push_back({e, 0, 1});
      continue;
    }

    NodeIndex at = edge.from;
    for (std::uint32_t i = 0; i < count; ++i) {
      NodeIndex next = edge.to;
      if (i + 1 < count) {
        std::optional<GeoPoint> pos;
        const auto& a = g.node(edge.from).position;
        const auto& b = g.node(edge.to).position;
        if (a && b) {
          double along = 0;
          for (std::uint32_t j = 0; j <= i; ++j)
            along += edge.segments[j].fraction;
          pos = GeoPoint{a->lat + (b->lat - a->lat) * along, a->lon + (b->lon - a->lon) * along};
        }
        next = out.graph.add_node(synthetic_node_id(g.id(edge.from), g.id(edge.to), ordinal, i), pos);
      }
      out.graph.add_edge(at, next, edge.segment_duration(i), {{1.0, edge.segments[i].covered}});
      out.origin.push_back({e, i, count});
      at = next;
    }
  }
  return out;
}

inline bool survives_simplification(const Edge& e, Budget d2)
{
  return e.segments.front().covered || d2.admits(e.duration);
}

inline std::vector<EdgeIndex> surviving_edges(const RoadGraph& g, Budget d2)
{
  if (g.label_form() != LabelForm::single)
    throw std::invalid_argument("simplification requires a singly-labelled graph");
  std::vector<EdgeIndex> kept;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    if (survives_simplification(g.edge(e), d2))
      kept.push_back(e);
  return kept;
}

/// Drops every uncovered edge longer than `d2`. Node set is unchanged.
inline RoadGraph simplify_graph(const RoadGraph& g, Budget d2)
{
  RoadGraph out;
  for (const auto& n : g.nodes())
    out.add_node(n.id, n.position);
  for (EdgeIndex e : surviving_edges(g, d2)) {
    const auto& edge = g.edge(e);
    out.add_edge(edge.from, edge.to, edge.duration, edge.segments);
  }
  return out;
}

inline TransformedGraph simplify_graph(const TransformedGraph& t, Budget d2)
{
  TransformedGraph out;
  out.original_node_count = t.original_node_count;
  for (const auto& n : t.graph.nodes())
    out.graph.add_node(n.id, n.position);
  for (EdgeIndex e : surviving_edges(t.graph, d2)) {
    const auto& edge = t.graph.edge(e);
    out.graph.add_edge(edge.from, edge.to, edge.duration, edge.segments);
    out.origin.push_back(t.origin[e]);
  }
  return out;
}

/// Maps a path over the partitioned graph back to original edges. A path
/// between original nodes always traverses whole chains.
inline Path fold_back(const TransformedGraph& t, const Path& p)
{
  Path out{p.origin, {}};
  for (EdgeIndex e : p.edges) {
    const auto& o = t.origin[e];
    if (o.segment == 0)
      out.edges.push_back(o.edge);
  }
  return out;
}

} // namespace covroute
