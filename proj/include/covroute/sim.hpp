#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "covroute/planner.hpp"
#include "covroute/trace.hpp"

namespace covroute {

class SimError : public Error
{
public:
  using Error::Error;
};

enum class TransportStatus
{
  en_route,
  arrived,
  aborted
};

inline std::string_view to_string(TransportStatus s)
{
  switch (s) {
  case TransportStatus::en_route: return "en_route";
  case TransportStatus::arrived: return "arrived";
  case TransportStatus::aborted: return "aborted";
  }
  return "unknown";
}

struct SetAlpha
{
  double value = 0;
};
struct RelabelGraph
{
  std::map<EdgeRef, std::vector<CoverageSegment>> labels;
};
struct ForceReplan
{};
struct Abort
{};

using EventKind = std::variant<SetAlpha, RelabelGraph, ForceReplan, Abort>;

struct SimEvent
{
  Seconds at_time = 0;
  EventKind kind;
};

inline std::string_view event_name(const EventKind& k)
{
  static constexpr std::string_view names[] = {"set_alpha", "relabel_graph", "force_replan", "abort"};
  return names[k.index()];
}

struct TraversedEdge
{
  EdgeIndex edge = 0;
  Seconds entry_time = 0;
};

/// Simulator state. Value type; every operation returns a new state and
/// snapshots handed out are never mutated.
struct TransportState
{
  Seconds clock = 0;
  std::shared_ptr<const RoadGraph> graph; // current label snapshot
  NodeIndex target = 0;
  PlannerConfig config;                   // applies to the next replan
  PlanResult active_plan;
  Seconds plan_started_at = 0;
  std::size_t leg = 0;                    // index into active_plan.chosen->edges
  double offset = 0;                      // fraction of the current leg's edge
  Seconds elapsed_on_leg = 0;             // seconds spent on the current leg
  std::vector<TraversedEdge> traversed;
  Seconds endured_breakage = 0;
  TransportStatus status = TransportStatus::en_route;
  bool replan_pending = false;
  std::size_t replans = 0;

  const Path& route() const { return *active_plan.chosen; }

  bool at_node() const { return status != TransportStatus::en_route || offset == 0; }

  NodeIndex current_node() const
  {
    const auto& r = route();
    if (leg >= r.edges.size())
      return path_end(*graph, r);
    return graph->edge(r.edges[leg]).from;
  }

  std::optional<EdgeIndex> current_edge() const
  {
    if (status != TransportStatus::en_route || leg >= route().edges.size())
      return std::nullopt;
    return route().edges[leg];
  }
};

namespace detail {

// Uncovered seconds of edge `e` between fractions a <= b.
inline Seconds uncovered_between(const Edge& e, double a, double b)
{
  Seconds sum = 0;
  double seg_begin = 0;
  for (const auto& s : e.segments) {
    const double seg_end = seg_begin + s.fraction;
    if (!s.covered) {
      const double lo = std::max(a, seg_begin);
      const double hi = std::min(b, seg_end);
      if (hi > lo)
        sum += (hi - lo) * e.duration;
    }
    seg_begin = seg_end;
  }
  return sum;
}

inline void replan_here(TransportState& st)
{
  auto next = replan(*st.graph, st.current_node(), st.target, st.config);
  if (!next.chosen)
    return; // labels never change topology; keep the current route
  st.active_plan = std::move(next);
  st.plan_started_at = st.clock;
  st.leg = 0;
  st.offset = 0;
  st.elapsed_on_leg = 0;
  st.replan_pending = false;
  ++st.replans;
}

} // namespace detail

inline TransportState start(std::shared_ptr<const RoadGraph> g, NodeIndex source, NodeIndex target,
                            const PlannerConfig& config)
{
  TransportState st;
  st.graph = std::move(g);
  st.target = target;
  st.config = config;
  st.active_plan = plan(*st.graph, source, target, config);
  if (!st.active_plan.chosen)
    throw SimError("target " + st.graph->id(target) + " is unreachable from " + st.graph->id(source));
  if (st.route().empty())
    st.status = TransportStatus::arrived;
  return st;
}

/// Moves `dt` seconds along the route at uniform speed within each edge.
/// Pending replans run at each node reached. Arrival pins the clock to the
/// plan's total duration.
inline TransportState advance(TransportState st, Seconds dt)
{
  if (st.status != TransportStatus::en_route)
    throw SimError("advance on a finished transport");
  if (!(dt > 0))
    throw std::invalid_argument("advance step must be positive");

  Seconds remaining = dt;
  while (remaining > 0 && st.status == TransportStatus::en_route) {
    if (st.offset == 0)
      st.traversed.push_back({st.route().edges[st.leg], st.clock});
    const auto& edge = st.graph->edge(st.route().edges[st.leg]);
    const Seconds left_on_edge = edge.duration - st.elapsed_on_leg;
    if (remaining >= left_on_edge - 1e-9 * edge.duration) {
      st.endured_breakage += detail::uncovered_between(edge, st.offset, 1.0);
      st.clock += left_on_edge;
      remaining -= left_on_edge;
      st.offset = 0;
      st.elapsed_on_leg = 0;
      ++st.leg;
      if (st.leg == st.route().edges.size()) {
        st.status = TransportStatus::arrived;
        st.clock = st.plan_started_at + st.active_plan.breakdown.total_duration;
      } else if (st.replan_pending) {
        detail::replan_here(st);
      }
    } else {
      st.elapsed_on_leg += remaining;
      const double to = st.elapsed_on_leg / edge.duration;
      st.endured_breakage += detail::uncovered_between(edge, st.offset, to);
      st.offset = to;
      st.clock += remaining;
      remaining = 0;
    }
  }
  return st;
}

/// Applies one event. Alpha and label changes take effect at the next node;
/// when the vehicle is already standing on a node the replan runs at once.
inline TransportState apply_event(TransportState st, const SimEvent& ev)
{
  if (st.status != TransportStatus::en_route)
    throw SimError("event after the transport finished");

  std::visit(
    [&](const auto& kind) {
      using K = std::decay_t<decltype(kind)>;
      if constexpr (std::is_same_v<K, SetAlpha>) {
        st.config.alpha = Alpha(kind.value);
        st.replan_pending = true;
      } else if constexpr (std::is_same_v<K, RelabelGraph>) {
        st.graph = std::make_shared<const RoadGraph>(apply_labels(*st.graph, kind.labels));
        st.replan_pending = true;
      } else if constexpr (std::is_same_v<K, ForceReplan>) {
        st.replan_pending = true;
      } else {
        st.status = TransportStatus::aborted;
      }
    },
    ev.kind);

  if (st.status == TransportStatus::en_route && st.replan_pending && st.offset == 0)
    detail::replan_here(st);
  return st;
}

struct TimelineEntry
{
  std::string trigger; // "start", "step", or the event name
  TransportState state;
};

/// Headless replay: at each step boundary, due events apply first in time
/// order (ties in submission order), then the clock advances by `step`.
inline std::vector<TimelineEntry> run(TransportState st, std::vector<SimEvent> events, Seconds step)
{
  if (!(step > 0))
    throw std::invalid_argument("step must be positive");
  std::stable_sort(events.begin(), events.end(),
                   [](const SimEvent& a, const SimEvent& b) { return a.at_time < b.at_time; });

  std::vector<TimelineEntry> timeline;
  timeline.push_back({"start", st});
  std::size_t next_event = 0;
  while (st.status == TransportStatus::en_route) {
    while (next_event < events.size() && events[next_event].at_time <= st.clock) {
      st = apply_event(std::move(st), events[next_event]);
      timeline.push_back({std::string(event_name(events[next_event].kind)), st});
      ++next_event;
      if (st.status != TransportStatus::en_route)
        return timeline;
    }
    st = advance(std::move(st), step);
    timeline.push_back({"step", st});
  }
  return timeline;
}

} // namespace covroute
