#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "covroute/json_fixed.hpp"
#include "covroute/plan_io.hpp"
#include "covroute/sim.hpp"

namespace covroute {

inline std::vector<CoverageSegment> segments_from_json(const Json& j)
{
  std::vector<CoverageSegment> out;
  for (const auto& s : j)
    out.push_back({s.at("fraction").get<double>(), s.at("covered").get<bool>()});
  return out;
}

// {"at_time_s":120,"kind":"set_alpha","value":4.0}
// {"at_time_s":60,"kind":"relabel_graph","labels":[{"from":"B","to":"D","segments":[...]}]}
// {"at_time_s":0,"kind":"force_replan"} / {"at_time_s":0,"kind":"abort"}
inline SimEvent event_from_json(const Json& j)
{
  SimEvent ev;
  try {
    ev.at_time = j.value("at_time_s", 0.0);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "set_alpha") {
      ev.kind = SetAlpha{j.at("value").get<double>()};
    } else if (kind == "relabel_graph") {
      RelabelGraph r;
      for (const auto& l : j.at("labels"))
        r.labels[EdgeRef{l.at("from").get<std::string>(), l.at("to").get<std::string>()}] =
          segments_from_json(l.at("segments"));
      ev.kind = std::move(r);
    } else if (kind == "force_replan") {
      ev.kind = ForceReplan{};
    } else if (kind == "abort") {
      ev.kind = Abort{};
    } else {
      throw SimError("unknown event kind '" + kind + "'");
    }
  } catch (const Json::exception& ex) {
    throw SimError(std::string("malformed event: ") + ex.what());
  }
  if (!(ev.at_time >= 0))
    throw SimError("event time must be >= 0");
  return ev;
}

inline std::vector<SimEvent> events_from_json(const Json& j)
{
  if (!j.is_array())
    throw SimError("event file must hold a JSON array");
  std::vector<SimEvent> out;
  for (const auto& e : j)
    out.push_back(event_from_json(e));
  return out;
}

inline std::vector<SimEvent> load_events_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw SimError("cannot open event file '" + path + "'");
  try {
    return events_from_json(Json::parse(in));
  } catch (const Json::parse_error& ex) {
    throw SimError(std::string("malformed event file: ") + ex.what());
  }
}

inline Json state_to_json(const TransportState& st, std::string_view trigger)
{
  const auto& g = *st.graph;
  Json position;
  if (auto e = st.current_edge(); e && st.offset > 0) {
    position = Json{{"from", g.id(g.edge(*e).from)}, {"to", g.id(g.edge(*e).to)}, {"offset", st.offset}};
  } else {
    position = Json{{"node", g.id(st.current_node())}};
  }
  Json traversed = Json::array();
  for (const auto& t : st.traversed)
    traversed.push_back(Json{{"from", g.id(g.edge(t.edge).from)},
                             {"to", g.id(g.edge(t.edge).to)},
                             {"entry_time_s", t.entry_time}});

  Json j;
  j["trigger"] = std::string(trigger);
  j["clock_s"] = st.clock;
  j["status"] = std::string(to_string(st.status));
  j["position"] = std::move(position);
  j["endured_breakage_s"] = st.endured_breakage;
  j["replans"] = st.replans;
  j["replan_pending"] = st.replan_pending;
  j["alpha"] = st.config.alpha.value();
  j["traversed"] = std::move(traversed);
  j["plan"] = plan_to_json(g, st.active_plan);
  return j;
}

} // namespace covroute
