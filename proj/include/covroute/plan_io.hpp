#pragma once

#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "covroute/json_fixed.hpp"
#include "covroute/planner.hpp"

namespace covroute {

inline double budget_number(Budget b)
{
  return b.is_unbounded() ? std::numeric_limits<double>::infinity() : b.value();
}

/// Wire form of a plan. Field order is fixed; unbounded budgets print as
/// null through write_fixed_json.
inline Json plan_to_json(const RoadGraph& g, const PlanResult& r)
{
  Json chosen = Json::array();
  Json edges = Json::array();
  if (r.chosen) {
    for (const auto& id : path_node_ids(g, *r.chosen))
      chosen.push_back(id);
    for (EdgeIndex e : r.chosen->edges)
      edges.push_back(Json::array({g.id(g.edge(e).from), g.id(g.edge(e).to)}));
  }
  Json rows = Json::array();
  for (const auto& row : r.matrix.rows)
    rows.push_back(Json{{"d1_s", budget_number(row.d1)}, {"path_count", row.paths.size()}});

  Json j;
  j["chosen_path"] = std::move(chosen);
  j["edges"] = std::move(edges);
  j["total_duration_s"] = r.breakdown.total_duration;
  j["breakage_s"] = r.breakdown.breakage_duration;
  j["max_breakage_run_s"] = r.max_breakage_run;
  j["cost"] = r.breakdown.cost;
  j["alpha"] = r.config.alpha.value();
  j["status"] = std::string(to_string(r.status));
  j["effective_d1_s"] = budget_number(r.effective_d1);
  j["matrix_summary"] = std::move(rows);
  return j;
}

inline std::string format_minutes(Seconds s)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f min (%.0f s)", s / 60.0, s);
  return buf;
}

inline std::string plan_to_text(const RoadGraph& g, const PlanResult& r)
{
  std::ostringstream os;
  os << "status:     " << to_string(r.status) << '\n';
  if (!r.chosen) {
    os << "route:      (none)\n";
    return os.str();
  }
  os << "route:      ";
  const auto ids = path_node_ids(g, *r.chosen);
  for (std::size_t i = 0; i < ids.size(); ++i)
    os << (i ? " -> " : "") << ids[i];
  os << '\n';
  os << "duration:   " << format_minutes(r.breakdown.total_duration) << '\n';
  os << "breakage:   " << format_minutes(r.breakdown.breakage_duration) << '\n';
  os << "max gap:    " << format_minutes(r.max_breakage_run) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.breakdown.cost);
  os << "cost:       " << buf << " s (alpha " << r.config.alpha.value() << ")\n";
  os << "D1 used:    " << (r.effective_d1.is_unbounded() ? std::string("unbounded") : format_minutes(r.effective_d1.value()))
     << '\n';
  for (const auto& row : r.matrix.rows)
    os << "  row D1=" << (row.d1.is_unbounded() ? std::string("inf") : std::to_string(row.d1.value())) << "  paths "
       << row.paths.size() << '\n';
  return os.str();
}

} // namespace covroute
