// covroute: command-line front end for the coverage-aware route planner.

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covroute/bench.hpp"
#include "covroute/graph_io.hpp"
#include "covroute/options.hpp"
#include "covroute/plan_io.hpp"
#include "covroute/service.hpp"
#include "covroute/sim_io.hpp"
#include "covroute/trace.hpp"

namespace {

using namespace covroute;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBestEffort = 2;
constexpr int kExitUnreachable = 3;

struct PlannerFlags
{
  std::string preset;
  std::optional<double> alpha;
  std::string d1, d2, relax_max;
  std::optional<std::size_t> k;
  std::optional<double> relax_d, beta1, beta2;
  std::optional<unsigned> h;

  void add_to(CLI::App& cmd)
  {
    cmd.add_option("--preset", preset, "Disease preset: hemorrhagic | ischemic");
    cmd.add_option("--alpha", alpha, "Breakage weight (>= 0)");
    cmd.add_option("--d1-s", d1, "Total breakage budget in seconds, or inf");
    cmd.add_option("--d2-s", d2, "Longest contiguous breakage budget in seconds, or inf");
    cmd.add_option("--k", k, "Candidate paths per D1 value");
    cmd.add_option("--relax-d", relax_d, "D1 growth coefficient (> 1)");
    cmd.add_option("--relax-max-s", relax_max, "D1 relaxation ceiling in seconds (default 4 x D1)");
    cmd.add_option("--beta1", beta1, "Lower sweep factor");
    cmd.add_option("--beta2", beta2, "Upper sweep factor");
    cmd.add_option("--h", h, "Number of sweep rows");
  }

  PlannerConfig resolve() const
  {
    PlanOptions o;
    if (!preset.empty())
      o.preset = preset;
    o.alpha = alpha;
    if (!d1.empty())
      o.d1 = parse_budget(d1);
    if (!d2.empty())
      o.d2 = parse_budget(d2);
    if (!relax_max.empty())
      o.relax_max = parse_budget(relax_max);
    o.k = k;
    o.relax_d = relax_d;
    o.beta1 = beta1;
    o.beta2 = beta2;
    o.h = h;
    return o.resolve();
  }
};

int plan_exit_code(PlanStatus s)
{
  switch (s) {
  case PlanStatus::optimal:
  case PlanStatus::relaxed: return kExitOk;
  case PlanStatus::best_effort: return kExitBestEffort;
  case PlanStatus::unreachable: return kExitUnreachable;
  }
  return kExitUsage;
}

std::vector<std::size_t> parse_k_list(const std::string& text)
{
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto k = std::stoul(item);
    if (k == 0)
      throw std::invalid_argument("k values must be positive");
    out.push_back(k);
  }
  if (out.empty())
    throw std::invalid_argument("empty --k-list");
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Coverage-aware emergency transport route planner"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Plan a route and print the plan document");
  std::string graph_path, from, to, format = "json";
  PlannerFlags plan_flags;
  plan_cmd->add_option("--graph", graph_path, "Graph JSON file")->required();
  plan_cmd->add_option("--from", from, "Origin node id")->required();
  plan_cmd->add_option("--to", to, "Destination node id")->required();
  plan_cmd->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
  plan_flags.add_to(*plan_cmd);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Label graph edges from a bandwidth trace");
  std::string trace_path, out_path;
  LabelingPolicy policy;
  ingest_cmd->add_option("--graph", graph_path, "Graph JSON file")->required();
  ingest_cmd->add_option("--trace", trace_path, "Trace CSV file")->required();
  ingest_cmd->add_option("--threshold-kbps", policy.threshold_kbps, "Coverage threshold");
  ingest_cmd->add_option("--hysteresis-kbps", policy.hysteresis_kbps, "Exit hysteresis below threshold");
  ingest_cmd->add_option("--min-segment-s", policy.min_segment_s, "Shortest run kept, seconds");
  ingest_cmd->add_option("--out", out_path, "Output graph JSON (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Replay a transport and print a JSON-lines timeline");
  std::string events_path;
  double step_s = 10;
  PlannerFlags sim_flags;
  sim_cmd->add_option("--graph", graph_path, "Graph JSON file")->required();
  sim_cmd->add_option("--from", from, "Origin node id")->required();
  sim_cmd->add_option("--to", to, "Destination node id")->required();
  sim_cmd->add_option("--events", events_path, "Event file (JSON array)");
  sim_cmd->add_option("--step-s", step_s, "Simulation step in seconds")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out", out_path, "Timeline output (default stdout)");
  sim_flags.add_to(*sim_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time plan() on a random planar graph");
  std::size_t nodes = 12000, edges = 30000, reps = 10;
  std::uint64_t seed = 1;
  std::string k_list = "1,10,100,1000";
  std::string bench_format = "text";
  bench_cmd->add_option("--nodes", nodes, "Node count");
  bench_cmd->add_option("--edges", edges, "Directed edge count");
  bench_cmd->add_option("--seed", seed, "Generator seed");
  bench_cmd->add_option("--k-list", k_list, "Comma-separated k values");
  bench_cmd->add_option("--reps", reps, "Repetitions per k")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--format", bench_format, "text | json")->check(CLI::IsMember({"json", "text"}));

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the local HTTP service");
  std::string bind = "127.0.0.1:8585";
  serve_cmd->add_option("--graph", graph_path, "Graph JSON file")->required();
  serve_cmd->add_option("--bind", bind, "host:port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan_cmd) {
      const auto g = load_graph_file(graph_path);
      const auto result = plan(g, from, to, plan_flags.resolve());
      if (format == "text")
        std::cout << plan_to_text(g, result);
      else
        std::cout << fixed_json(plan_to_json(g, result)) << '\n';
      return plan_exit_code(result.status);
    }

    if (*ingest_cmd) {
      const auto g = load_graph_file(graph_path);
      std::ifstream trace(trace_path);
      if (!trace)
        throw Error("cannot open trace file '" + trace_path + "'");
      const auto samples = parse_trace(trace, g);
      const auto labelled = apply_labels(g, label_trace(g, samples, policy));
      auto doc = graph_to_json(labelled);
      doc["labeling"] = {{"threshold_kbps", policy.threshold_kbps},
                         {"hysteresis_kbps", policy.hysteresis_kbps},
                         {"min_segment_s", policy.min_segment_s},
                         {"samples", samples.size()}};
      if (out_path.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        std::ofstream out(out_path);
        out << doc.dump(2) << '\n';
        if (!out)
          throw Error("cannot write '" + out_path + "'");
      }
      return kExitOk;
    }

    if (*sim_cmd) {
      auto g = std::make_shared<const RoadGraph>(load_graph_file(graph_path));
      const auto events = events_path.empty() ? std::vector<SimEvent>{} : load_events_file(events_path);
      auto state = start(g, g->node_index(from), g->node_index(to), sim_flags.resolve());
      const auto timeline = run(std::move(state), events, step_s);
      std::ofstream file;
      if (!out_path.empty())
        file.open(out_path);
      std::ostream& out = out_path.empty() ? std::cout : file;
      for (const auto& entry : timeline)
        out << fixed_json(state_to_json(entry.state, entry.trigger)) << '\n';
      return kExitOk;
    }

    if (*bench_cmd) {
      const auto ks = parse_k_list(k_list);
      const auto g = random_planar_road_graph(nodes, edges, seed);
      const auto rows = run_bench(g, ks, reps, seed);
      if (bench_format == "json") {
        Json doc{{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"seed", seed}, {"rows", Json::array()}};
        for (const auto& r : rows)
          doc["rows"].push_back(Json{{"k", r.k},
                                     {"reps", r.reps},
                                     {"mean_ms", r.mean_ms},
                                     {"min_ms", r.min_ms},
                                     {"max_ms", r.max_ms},
                                     {"mean_paths", r.mean_paths}});
        std::cout << fixed_json(doc) << '\n';
      } else {
        std::printf("graph: %zu nodes, %zu edges, seed %llu\n", g.node_count(), g.edge_count(),
                    static_cast<unsigned long long>(seed));
        std::printf("%8s %6s %12s %12s %12s %10s\n", "k", "reps", "mean_ms", "min_ms", "max_ms", "paths");
        for (const auto& r : rows)
          std::printf("%8zu %6zu %12.3f %12.3f %12.3f %10.1f\n", r.k, r.reps, r.mean_ms, r.min_ms, r.max_ms,
                      r.mean_paths);
      }
      return kExitOk;
    }

    if (*serve_cmd) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("--bind expects host:port");
      const std::string host = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      DispatchService service(load_graph_file(graph_path));
      httplib::Server server;
      service.install(server);
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot bind " << bind << '\n';
        return kExitUsage;
      }
      return kExitOk;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
