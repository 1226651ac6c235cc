#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "covroute/graph.hpp"

namespace covroute {

/// Ranking shared by every enumeration and selection step: duration, then
/// fewer edges, then node-id sequence, then edge indices (parallel roads).
class PathOrder
{
public:
  explicit PathOrder(const RoadGraph& g) : graph_(&g) {}

  /// Three-way comparison of everything after duration.
  int compare_tiebreak(const Path& a, const Path& b) const
  {
    if (a.edges.size() != b.edges.size())
      return a.edges.size() < b.edges.size() ? -1 : 1;
    if (int c = compare_node(a.origin, b.origin))
      return c;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
      if (int c = compare_node(graph_->edge(a.edges[i]).to, graph_->edge(b.edges[i]).to))
        return c;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
      if (a.edges[i] != b.edges[i])
        return a.edges[i] < b.edges[i] ? -1 : 1;
    return 0;
  }

  bool less(Seconds duration_a, const Path& a, Seconds duration_b, const Path& b) const
  {
    if (duration_a != duration_b)
      return duration_a < duration_b;
    return compare_tiebreak(a, b) < 0;
  }

  int compare_node(NodeIndex a, NodeIndex b) const
  {
    if (a == b)
      return 0;
    return graph_->id(a).compare(graph_->id(b)) < 0 ? -1 : 1;
  }

  const RoadGraph& graph() const { return *graph_; }

private:
  const RoadGraph* graph_;
};

namespace detail {

/// Point-to-point search toward a fixed target with nodes and edges masked
/// out per query. Uses A* with exact distances-to-target on the unmasked
/// graph; masking only removes edges, so the heuristic stays consistent.
/// Among equal (duration, hops) labels the lexicographically smaller node-id
/// sequence wins, which makes the result the minimum under PathOrder.
class SpurSearch
{
public:
  static constexpr Seconds kInf = std::numeric_limits<Seconds>::infinity();

  SpurSearch(const RoadGraph& g, NodeIndex target)
    : graph_(&g), order_(g), target_(target), h_(g.node_count(), kInf), dist_(g.node_count()),
      hops_(g.node_count()), pred_(g.node_count()), seen_(g.node_count(), 0),
      closed_(g.node_count(), 0), node_block_(g.node_count(), 0), edge_block_(g.edge_count(), 0)
  {
    reverse_dijkstra();
  }

  bool reaches_target(NodeIndex n) const { return h_[n] < kInf; }

  /// Best path from `from` to the target avoiding `blocked_nodes` and
  /// `blocked_edges`, as an edge list; nullopt when none exists.
  std::optional<std::vector<EdgeIndex>> run(NodeIndex from, std::span<const NodeIndex> blocked_nodes,
                                            std::span<const EdgeIndex> blocked_edges)
  {
    if (!reaches_target(from))
      return std::nullopt;
    ++epoch_;
    for (NodeIndex n : blocked_nodes)
      node_block_[n] = epoch_;
    for (EdgeIndex e : blocked_edges)
      edge_block_[e] = epoch_;
    if (node_block_[from] == epoch_)
      return std::nullopt;

    struct Entry
    {
      Seconds f;
      Seconds g;
      std::uint32_t hops;
      NodeIndex node;
      bool operator>(const Entry& o) const
      {
        if (f != o.f)
          return f > o.f;
        if (g != o.g)
          return g > o.g;
        if (hops != o.hops)
          return hops > o.hops;
        return node > o.node;
      }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    seen_[from] = epoch_;
    dist_[from] = 0;
    hops_[from] = 0;
    pred_[from] = kNoEdge;
    open.push({h_[from], 0, 0, from});

    while (!open.empty()) {
      const Entry top = open.top();
      open.pop();
      const NodeIndex u = top.node;
      if (closed_[u] == epoch_ || top.g != dist_[u] || top.hops != hops_[u])
        continue;
      closed_[u] = epoch_;
      if (u == target_)
        return trace_back(from);

      for (EdgeIndex e : graph_->out_edges(u)) {
        if (edge_block_[e] == epoch_)
          continue;
        const auto& edge = graph_->edge(e);
        const NodeIndex v = edge.to;
        if (node_block_[v] == epoch_ || closed_[v] == epoch_ || h_[v] == kInf)
          continue;
        const Seconds g = dist_[u] + edge.duration;
        const std::uint32_t hops = hops_[u] + 1;
        bool better = seen_[v] != epoch_;
        if (!better) {
          if (g != dist_[v])
            better = g < dist_[v];
          else if (hops != hops_[v])
            better = hops < hops_[v];
          else
            better = prefix_less(e, pred_[v]);
        }
        if (better) {
          seen_[v] = epoch_;
          dist_[v] = g;
          hops_[v] = hops;
          pred_[v] = e;
          open.push({g + h_[v], g, hops, v});
        }
      }
    }
    return std::nullopt;
  }

private:
  static constexpr EdgeIndex kNoEdge = std::numeric_limits<EdgeIndex>::max();

  void reverse_dijkstra()
  {
    using Item = std::pair<Seconds, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    h_[target_] = 0;
    open.push({0, target_});
    while (!open.empty()) {
      auto [d, v] = open.top();
      open.pop();
      if (d != h_[v])
        continue;
      for (EdgeIndex e : graph_->in_edges(v)) {
        const auto& edge = graph_->edge(e);
        const Seconds nd = edge.duration + d;
        if (nd < h_[edge.from]) {
          h_[edge.from] = nd;
          open.push({nd, edge.from});
        }
      }
    }
  }

  // Both edges end at the same node and their tails carry equal-length
  // labels; compares the two full prefixes by node ids, then edge indices.
  bool prefix_less(EdgeIndex a, EdgeIndex b) const
  {
    std::vector<EdgeIndex> pa, pb;
    EdgeIndex ea = a, eb = b;
    while (ea != eb) {
      pa.push_back(ea);
      pb.push_back(eb);
      const NodeIndex na = graph_->edge(ea).from;
      const NodeIndex nb = graph_->edge(eb).from;
      if (na == nb)
        break;
      ea = pred_[na];
      eb = pred_[nb];
    }
    // pa/pb hold the differing tails in reverse travel order.
    for (std::size_t i = pa.size(); i-- > 0;) {
      if (int c = order_.compare_node(graph_->edge(pa[i]).from, graph_->edge(pb[i]).from))
        return c < 0;
    }
    for (std::size_t i = pa.size(); i-- > 0;)
      if (pa[i] != pb[i])
        return pa[i] < pb[i];
    return false;
  }

  std::vector<EdgeIndex> trace_back(NodeIndex from) const
  {
    std::vector<EdgeIndex> edges;
    for (NodeIndex at = target_; at != from;) {
      const EdgeIndex e = pred_[at];
      edges.push_back(e);
      at = graph_->edge(e).from;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  const RoadGraph* graph_;
  PathOrder order_;
  NodeIndex target_;
  std::vector<Seconds> h_;
  std::vector<Seconds> dist_;
  std::vector<std::uint32_t> hops_;
  std::vector<EdgeIndex> pred_;
  std::vector<std::uint32_t> seen_, closed_, node_block_, edge_block_;
  std::uint32_t epoch_ = 0;
};

/// Edge-sequence trie over accepted paths; children of a prefix are the
/// edges a deviation at that prefix must not reuse.
class PrefixTrie
{
public:
  PrefixTrie() : nodes_(1) {}

  void insert(std::span<const EdgeIndex> edges)
  {
    std::uint32_t at = 0;
    for (EdgeIndex e : edges)
      at = child_or_create(at, e);
  }

  std::uint32_t child(std::uint32_t at, EdgeIndex e) const
  {
    for (auto [edge, next] : nodes_[at].children)
      if (edge == e)
        return next;
    return kNone;
  }

  void child_edges(std::uint32_t at, std::vector<EdgeIndex>& out) const
  {
    out.clear();
    for (auto [edge, next] : nodes_[at].children)
      out.push_back(edge);
  }

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

private:
  struct TrieNode
  {
    std::vector<std::pair<EdgeIndex, std::uint32_t>> children;
  };

  std::uint32_t child_or_create(std::uint32_t at, EdgeIndex e)
  {
    if (auto c = child(at, e); c != kNone)
      return c;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[at].children.emplace_back(e, id);
    return id;
  }

  std::vector<TrieNode> nodes_;
};

} // namespace detail

/// Lazy loopless k-shortest-path enumeration (Yen's deviation scheme with
/// Lawler's restart index). Yields simple source-target paths one at a time
/// in PathOrder. Holds a pointer to the graph, which must outlive the stream.
/// Movable, not copyable.
class PathStream
{
public:
  PathStream(const RoadGraph& g, NodeIndex source, NodeIndex target)
    : graph_(&g), source_(source), target_(target), search_(g, target),
      candidates_(CandidateLess{PathOrder(g)})
  {
    if (source >= g.node_count() || target >= g.node_count())
      throw std::out_of_range("node index out of range");
  }

  PathStream(const PathStream&) = delete;
  PathStream& operator=(const PathStream&) = delete;
  PathStream(PathStream&&) noexcept = default;
  PathStream& operator=(PathStream&&) noexcept = default;

  std::optional<Path> next()
  {
    if (exhausted_)
      return std::nullopt;
    if (!started_) {
      started_ = true;
      if (source_ == target_) {
        last_ = Candidate{Path{source_, {}}, 0, 0};
        exhausted_ = true; // the empty path is the only simple one
        ++yielded_;
        return last_.path;
      }
      auto first = search_.run(source_, {}, {});
      if (!first) {
        exhausted_ = true;
        return std::nullopt;
      }
      Path p{source_, std::move(*first)};
      last_ = Candidate{p, path_duration(*graph_, p), 0};
    } else {
      expand_last();
      if (candidates_.empty()) {
        exhausted_ = true;
        return std::nullopt;
      }
      last_ = std::move(candidates_.extract(candidates_.begin()).value());
    }
    accepted_.insert(last_.path.edges);
    ++yielded_;
    return last_.path;
  }

  bool exhausted() const noexcept { return exhausted_; }
  std::size_t yielded() const noexcept { return yielded_; }
  std::size_t pending_candidates() const noexcept { return candidates_.size(); }
  NodeIndex source() const noexcept { return source_; }
  NodeIndex target() const noexcept { return target_; }
  const RoadGraph& graph() const noexcept { return *graph_; }

private:
  struct Candidate
  {
    Path path;
    Seconds duration = 0;
    std::uint32_t deviation = 0; // index of the spur node within the path
  };

  struct CandidateLess
  {
    PathOrder order;
    bool operator()(const Candidate& a, const Candidate& b) const
    {
      return order.less(a.duration, a.path, b.duration, b.path);
    }
  };

  void expand_last()
  {
    const auto& edges = last_.path.edges;
    const auto nodes = path_nodes(*graph_, last_.path);

    std::uint32_t trie_at = 0;
    for (std::uint32_t i = 0; i < last_.deviation; ++i)
      trie_at = accepted_.child(trie_at, edges[i]);

    std::vector<EdgeIndex> blocked_edges;
    for (std::uint32_t i = last_.deviation; i < edges.size(); ++i) {
      accepted_.child_edges(trie_at, blocked_edges);
      const std::span<const NodeIndex> root_nodes(nodes.data(), i);
      if (auto spur = search_.run(nodes[i], root_nodes, blocked_edges)) {
        Candidate c;
        c.path.origin = source_;
        c.path.edges.reserve(i + spur->size());
        c.path.edges.assign(edges.begin(), edges.begin() + i);
        c.path.edges.insert(c.path.edges.end(), spur->begin(), spur->end());
        c.duration = path_duration(*graph_, c.path);
        c.deviation = i;
        candidates_.insert(std::move(c));
      }
      trie_at = accepted_.child(trie_at, edges[i]);
    }
  }

  const RoadGraph* graph_;
  NodeIndex source_;
  NodeIndex target_;
  detail::SpurSearch search_;
  std::set<Candidate, CandidateLess> candidates_;
  detail::PrefixTrie accepted_;
  Candidate last_;
  bool started_ = false;
  bool exhausted_ = false;
  std::size_t yielded_ = 0;
};

inline PathStream open_stream(const RoadGraph& g, NodeIndex source, NodeIndex target)
{
  return PathStream(g, source, target);
}

inline PathStream open_stream(const RoadGraph& g, std::string_view source, std::string_view target)
{
  return PathStream(g, g.node_index(source), g.node_index(target));
}

inline std::optional<Path> next_path(PathStream& stream) { return stream.next(); }

/// Minimum-duration simple path under PathOrder; nullopt if unreachable.
inline std::optional<Path> shortest_path(const RoadGraph& g, NodeIndex source, NodeIndex target)
{
  if (source == target)
    return Path{source, {}};
  detail::SpurSearch search(g, target);
  auto edges = search.run(source, {}, {});
  if (!edges)
    return std::nullopt;
  return Path{source, std::move(*edges)};
}

inline std::optional<Path> shortest_path(const RoadGraph& g, std::string_view source,
                                         std::string_view target)
{
  return shortest_path(g, g.node_index(source), g.node_index(target));
}

} // namespace covroute
