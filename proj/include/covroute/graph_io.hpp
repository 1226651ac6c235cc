#pragma once

#include <fstream>
#include <istream>
#include <string>

#include "covroute/graph.hpp"
#include "covroute/json_fixed.hpp"

namespace covroute {

// Graph document:
//   {"nodes":[{"id":"A","lat":40.46,"lon":-87.66}],
//    "edges":[{"from":"A","to":"B","duration_s":600,
//              "segments":[{"fraction":0.5,"covered":true},...]}]}
// lat/lon and segments are optional; missing segments mean fully covered.

inline RoadGraph graph_from_json(const Json& doc)
{
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw GraphError("parse failure: expected an object with a \"nodes\" array");

  RoadGraph g;
  try {
    for (const auto& n : doc["nodes"]) {
      std::optional<GeoPoint> pos;
      if (n.contains("lat") && n.contains("lon"))
        pos = GeoPoint{n.at("lat").get<double>(), n.at("lon").get<double>()};
      g.add_node(n.at("id").get<std::string>(), pos);
    }
    if (!doc.contains("edges"))
      return g;
    for (const auto& e : doc.at("edges")) {
      const auto from_id = e.at("from").get<std::string>();
      const auto to_id = e.at("to").get<std::string>();
      auto from = g.find_node(from_id);
      auto to = g.find_node(to_id);
      if (!from || !to)
        throw GraphError("dangling endpoint '" + (from ? to_id : from_id) + "'");

      std::vector<CoverageSegment> segments{{1.0, true}};
      if (e.contains("segments")) {
        segments.clear();
        for (const auto& s : e.at("segments"))
          segments.push_back({s.at("fraction").get<double>(), s.at("covered").get<bool>()});
      }
      g.add_edge(*from, *to, e.at("duration_s").get<double>(), std::move(segments));
    }
  } catch (const Json::exception& ex) {
    throw GraphError(std::string("parse failure: ") + ex.what());
  }
  return g;
}

inline RoadGraph load_graph(std::istream& in)
{
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw GraphError(std::string("parse failure: ") + ex.what());
  }
  return graph_from_json(doc);
}

inline RoadGraph load_graph_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw GraphError("cannot open graph file '" + path + "'");
  return load_graph(in);
}

inline Json graph_to_json(const RoadGraph& g)
{
  Json nodes = Json::array();
  for (const auto& n : g.nodes()) {
    Json node{{"id", n.id}};
    if (n.position) {
      node["lat"] = n.position->lat;
      node["lon"] = n.position->lon;
    }
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    Json segments = Json::array();
    for (const auto& s : e.segments)
      segments.push_back({{"fraction", s.fraction}, {"covered", s.covered}});
    edges.push_back({{"from", g.id(e.from)},
                     {"to", g.id(e.to)},
                     {"duration_s", e.duration},
                     {"segments", std::move(segments)}});
  }
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

} // namespace covroute
