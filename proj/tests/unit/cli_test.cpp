#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "covroute/bench.hpp"
#include "covroute/graph_io.hpp"
#include "covroute/options.hpp"
#include "covroute/plan_io.hpp"

using namespace covroute;
namespace fs = std::filesystem;

namespace {

struct Output
{
  int code = -1;
  std::string out;
};

Output cli(const std::string& args)
{
  const std::string cmd = std::string(COVROUTE_CLI) + " " + args + " 2>/dev/null";
  Output r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kData = COVROUTE_DATA_DIR;
const std::string kTwoRoute = kData + "/two_route.json";

fs::path scratch(const std::string& name)
{
  const auto dir = fs::temp_directory_path() / "covroute_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

} // namespace

TEST(Cli, PresetsPickExpectedRoutes)
{
  auto isc = cli("plan --graph " + kTwoRoute + " --from A --to F --preset ischemic");
  EXPECT_EQ(isc.code, 0);
  EXPECT_EQ(Json::parse(isc.out)["chosen_path"], Json::array({"A", "B", "C", "F"}));
  auto hem = cli("plan --graph " + kTwoRoute + " --from A --to F --preset hemorrhagic");
  EXPECT_EQ(hem.code, 0);
  EXPECT_EQ(Json::parse(hem.out)["chosen_path"], Json::array({"A", "B", "D", "F"}));
}

TEST(Cli, AlphaZeroUnboundedIsShortest)
{
  auto r = cli("plan --graph " + kTwoRoute + " --from A --to F --alpha 0 --d1-s inf --d2-s inf");
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["total_duration_s"], 2100.0);
  EXPECT_EQ(j["status"], "optimal");
}

TEST(Cli, UsageErrors)
{
  EXPECT_EQ(cli("plan --from A --to F").code, 1);
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("plan --graph " + kTwoRoute + " --from A --to Q").code, 1);
  EXPECT_EQ(cli("plan --graph /nonexistent.json --from A --to F").code, 1);
  EXPECT_EQ(cli("plan --graph " + kTwoRoute + " --from A --to F --d1-s abc").code, 1);
  EXPECT_EQ(cli("plan --graph " + kTwoRoute + " --from A --to F --format xml").code, 1);
  EXPECT_EQ(cli("plan --graph " + kTwoRoute + " --from A --to F --preset unknown").code, 1);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, BestEffortAndUnreachableExitCodes)
{
  const auto path = scratch("strict.json");
  std::ofstream(path) << R"({"nodes":[{"id":"A"},{"id":"B"},{"id":"C"}],"edges":[)"
                      << R"({"from":"A","to":"B","duration_s":100,"segments":[{"fraction":1,"covered":false}]}]})";
  auto best = cli("plan --graph " + path.string() + " --from A --to B --d1-s 10 --relax-max-s 20");
  EXPECT_EQ(best.code, 2);
  EXPECT_EQ(Json::parse(best.out)["status"], "best_effort");
  auto relaxed = cli("plan --graph " + path.string() + " --from A --to B --d1-s 50 --relax-d 2 --relax-max-s 100");
  EXPECT_EQ(relaxed.code, 0);
  EXPECT_EQ(Json::parse(relaxed.out)["status"], "relaxed");
  auto none = cli("plan --graph " + path.string() + " --from A --to C");
  EXPECT_EQ(none.code, 3);
  EXPECT_EQ(Json::parse(none.out)["status"], "unreachable");
}

TEST(Cli, DeterministicAndMatchesLibrary)
{
  const std::string args = "plan --graph " + kData + "/small_planar.json --from A --to F --alpha 1.7 --d1-s 200 "
                           "--d2-s 250 --k 4 --beta1 0.5 --beta2 1.5 --h 3";
  const auto a = cli(args);
  const auto b = cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto g = load_graph_file(kData + "/small_planar.json");
  PlanOptions o;
  o.alpha = 1.7;
  o.d1 = Budget::of(200);
  o.d2 = Budget::of(250);
  o.k = 4;
  o.beta1 = 0.5;
  o.beta2 = 1.5;
  o.h = 3;
  EXPECT_EQ(a.out, fixed_json(plan_to_json(g, plan(g, "A", "F", o.resolve()))) + "\n");
}

TEST(Cli, TextFormat)
{
  auto r = cli("plan --graph " + kTwoRoute + " --from A --to F --preset ischemic --format text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("A -> B -> C -> F"), std::string::npos);
}

TEST(Cli, IngestWritesLabelledGraph)
{
  const auto out = scratch("labelled.json");
  fs::remove(out);
  auto r = cli("ingest --graph " + kData + "/two_route_unlabelled.json --trace " + kData +
               "/two_route_trace.csv --threshold-kbps 256 --hysteresis-kbps 64 --min-segment-s 8 --out " +
               out.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(out);
  const auto doc = Json::parse(in);
  EXPECT_EQ(doc["labeling"]["threshold_kbps"], 256.0);
  const auto g = graph_from_json(doc);
  EXPECT_EQ(g.label_form(), LabelForm::multi);
  PlanOptions o;
  o.preset = "hemorrhagic";
  EXPECT_EQ(plan(g, "A", "F", o.resolve()).breakdown.breakage_duration, 480);

  const auto bad = scratch("bad.csv");
  std::ofstream(bad) << "timestamp_s,route_id,from,to,offset,bandwidth_kbps\n0,r,A,Q,0,5\n";
  EXPECT_EQ(cli("ingest --graph " + kTwoRoute + " --trace " + bad.string()).code, 1);
}

TEST(Cli, SimulateTimeline)
{
  auto r = cli("simulate --graph " + kTwoRoute + " --from A --to F --preset hemorrhagic --events " + kData +
               "/events.json --step-s 60");
  ASSERT_EQ(r.code, 0);
  std::vector<Json> lines;
  std::size_t start = 0, end;
  while ((end = r.out.find('\n', start)) != std::string::npos) {
    lines.push_back(Json::parse(r.out.substr(start, end - start)));
    start = end + 1;
  }
  ASSERT_GT(lines.size(), 3u);
  EXPECT_EQ(lines.front()["trigger"], "start");
  EXPECT_EQ(lines.back()["status"], "arrived");
  EXPECT_EQ(lines.back()["clock_s"], 2820.0);
  EXPECT_EQ(lines.back()["replans"], 2);
}

TEST(Cli, BenchSmoke)
{
  auto r = cli("bench --nodes 10 --edges 30 --k-list 1 --reps 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mean_ms"), std::string::npos);
  auto j = cli("bench --nodes 200 --edges 600 --k-list 1,5,20 --reps 3 --format json");
  ASSERT_EQ(j.code, 0);
  const auto doc = Json::parse(j.out);
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["rows"][2]["k"], 20);
  EXPECT_EQ(cli("bench --k-list 0 --nodes 10").code, 1);
}

TEST(Bench, GeneratorShape)
{
  const auto g = random_planar_road_graph(500, 1400, 9);
  EXPECT_EQ(g.node_count(), 500u);
  EXPECT_EQ(g.edge_count(), 1400u);
  std::size_t covered = 0;
  for (const auto& e : g.edges()) {
    EXPECT_GE(e.duration, 30.0);
    EXPECT_LE(e.duration, 600.0);
    covered += e.segments[0].covered;
  }
  EXPECT_NEAR(double(covered) / g.edge_count(), 0.7, 0.05);
  // Strongly connected: every node reaches node 0 and back.
  for (NodeIndex n = 1; n < 500; n += 37) {
    EXPECT_TRUE(shortest_path(g, 0, n));
    EXPECT_TRUE(shortest_path(g, n, 0));
  }
  const auto again = random_planar_road_graph(500, 1400, 9);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    ASSERT_EQ(g.edge(e).duration, again.edge(e).duration);
}

TEST(Bench, RowsMatchKList)
{
  const auto g = random_planar_road_graph(300, 800, 4);
  const std::vector<std::size_t> ks{1, 10, 50};
  const auto rows = run_bench(g, ks, 3, 4);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].k, ks[i]);
    EXPECT_EQ(rows[i].mean_paths, double(ks[i]));
  }
}
