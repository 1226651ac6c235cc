// Plans the bundled two-route graph under both presets, then drives a transport
// whose alpha is raised mid-route and prints each snapshot.
#include <iostream>

#include "covroute/graph_io.hpp"
#include "covroute/options.hpp"
#include "covroute/plan_io.hpp"
#include "covroute/sim.hpp"
#include "covroute/sim_io.hpp"

using namespace covroute;

int main(int argc, char** argv)
{
  const std::string path = argc > 1 ? argv[1] : std::string(COVROUTE_DATA_DIR) + "/two_route.json";
  auto graph = std::make_shared<const RoadGraph>(load_graph_file(path));

  for (const char* name : {"hemorrhagic", "ischemic"}) {
    PlanOptions o;
    o.preset = name;
    std::cout << "== " << name << "\n" << plan_to_text(*graph, plan(*graph, "A", "F", o.resolve())) << "\n";
  }

  PlanOptions o;
  o.preset = "hemorrhagic";
  auto state = start(graph, graph->node_index("A"), graph->node_index("F"), o.resolve());
  const std::vector<SimEvent> events{{300, SetAlpha{4.0}}};
  for (const auto& entry : run(std::move(state), events, 300))
    std::cout << fixed_json(state_to_json(entry.state, entry.trigger)) << "\n";
}
