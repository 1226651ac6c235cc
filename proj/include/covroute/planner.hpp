#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>

#include "covroute/constraints.hpp"
#include "covroute/graph.hpp"
#include "covroute/ksp.hpp"
#include "covroute/transform.hpp"

namespace covroute {

/// Dimensionless weight on breakage time relative to travel time.
class Alpha
{
public:
  Alpha() = default;
  explicit Alpha(double value) : value_(value)
  {
    if (!std::isfinite(value) || value < 0)
      throw std::invalid_argument("alpha must be finite and >= 0");
  }
  double value() const noexcept { return value_; }
  friend bool operator==(const Alpha&, const Alpha&) = default;

private:
  double value_ = 1.0;
};

struct CostBreakdown
{
  Seconds total_duration = 0;
  Seconds breakage_duration = 0;
  Seconds cost = 0; // total_duration + alpha * breakage_duration
};

inline CostBreakdown score(const RoadGraph& g, const Path& p, Alpha alpha)
{
  CostBreakdown b;
  b.total_duration = path_duration(g, p);
  b.breakage_duration = breakage_total(g, p);
  b.cost = b.total_duration + alpha.value() * b.breakage_duration;
  return b;
}

struct PlannerConfig
{
  Alpha alpha;
  Requirements requirements;
  std::size_t k = 10;
  RelaxationPolicy relaxation;
  SweepPolicy sweep;
  std::size_t scan_limit = CandidatePool::kDefaultScanLimit;

  void validate() const
  {
    if (k == 0)
      throw std::invalid_argument("k must be positive");
    if (scan_limit == 0)
      throw std::invalid_argument("scan limit must be positive");
    relaxation.validate(requirements.d1);
    sweep.validate();
  }
};

struct Selection
{
  Path path;
  CostBreakdown breakdown;
  std::size_t row = 0;
};

/// Lowest weighted cost over all matrix entries; ties go to shorter duration,
/// then PathOrder. Repeated paths across rows are scored once (first row).
inline std::optional<Selection> select_optimal(const RoadGraph& g, const CandidateMatrix& matrix, Alpha alpha)
{
  const PathOrder order(g);
  std::optional<Selection> best;
  std::set<std::vector<EdgeIndex>> seen;
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    for (const auto& p : matrix.rows[r].paths) {
      if (!seen.insert(p.edges).second)
        continue;
      auto b = score(g, p, alpha);
      bool better = !best;
      if (!better) {
        const auto& cur = best->breakdown;
        if (b.cost != cur.cost)
          better = b.cost < cur.cost;
        else if (b.total_duration != cur.total_duration)
          better = b.total_duration < cur.total_duration;
        else
          better = order.compare_tiebreak(p, best->path) < 0;
      }
      if (better)
        best = Selection{p, b, r};
    }
  }
  return best;
}

enum class PlanStatus
{
  optimal,     // requirements met at the configured D1
  relaxed,     // requirements met after D1 grew
  best_effort, // infeasible; plain shortest path substituted
  unreachable
};

inline std::string_view to_string(PlanStatus s)
{
  switch (s) {
  case PlanStatus::optimal: return "optimal";
  case PlanStatus::relaxed: return "relaxed";
  case PlanStatus::best_effort: return "best_effort";
  case PlanStatus::unreachable: return "unreachable";
  }
  return "unknown";
}

struct PlanResult
{
  NodeIndex source = 0;
  NodeIndex target = 0;
  std::optional<Path> chosen;      // over the caller's graph
  CostBreakdown breakdown;         // cost decomposition of `chosen`
  Seconds max_breakage_run = 0;
  CandidateMatrix matrix;          // over search_graph
  PlanStatus status = PlanStatus::unreachable;
  Budget effective_d1;             // D1 after relaxation; the sweep centre
  PlannerConfig config;            // as requested (base D1 lives here)
  std::shared_ptr<const TransformedGraph> search_graph; // partitioned + simplified
};

/// Full pipeline: partition multi-labelled edges, drop uncovered edges
/// longer than D2, collect candidates with D1 relaxation, sweep D1 around
/// the relaxed value, then take the cost argmin. The result is expressed
/// over the original edges of `g`.
inline PlanResult plan(const RoadGraph& g, NodeIndex source, NodeIndex target, const PlannerConfig& config)
{
  config.validate();
  if (source >= g.node_count() || target >= g.node_count())
    throw std::out_of_range("node index out of range");

  PlanResult result;
  result.source = source;
  result.target = target;
  result.config = config;
  result.effective_d1 = config.requirements.d1;

  if (source == target) {
    result.chosen = Path{source, {}};
    result.status = PlanStatus::optimal;
    return result;
  }

  const auto partitioned = transform_graph(g);
  auto search = std::make_shared<TransformedGraph>(simplify_graph(partitioned, config.requirements.d2));
  result.search_graph = search;

  CandidatePool pool(search->graph, source, target, config.scan_limit);
  auto relaxed = relax_until_found(pool, partitioned.graph, config.requirements, config.k, config.relaxation);
  result.effective_d1 = relaxed.effective_d1;

  if (relaxed.status == RelaxStatus::unreachable) {
    result.status = PlanStatus::unreachable;
    return result;
  }
  if (relaxed.status == RelaxStatus::best_effort) {
    result.status = PlanStatus::best_effort;
    result.chosen = fold_back(partitioned, relaxed.paths.front());
  } else {
    result.matrix = sweep(pool, relaxed.effective_d1, config.requirements.d2, config.k, config.sweep);
    // A grid lying wholly below the relaxed D1 can come back empty; the
    // relaxation's own candidates are then the only valid set.
    CandidateMatrix fallback{{CandidateRow{relaxed.effective_d1, relaxed.paths}}};
    const auto& pick_from = result.matrix.empty() ? fallback : result.matrix;
    auto best = select_optimal(search->graph, pick_from, config.alpha);
    result.chosen = fold_back(*search, best->path);
    result.status = relaxed.effective_d1 == config.requirements.d1 ? PlanStatus::optimal : PlanStatus::relaxed;
  }

  result.breakdown = score(g, *result.chosen, config.alpha);
  result.max_breakage_run = breakage_max_run(g, *result.chosen);
  return result;
}

inline PlanResult plan(const RoadGraph& g, std::string_view source, std::string_view target,
                       const PlannerConfig& config)
{
  return plan(g, g.node_index(source), g.node_index(target), config);
}

/// Fresh plan from an intermediate node; budgets apply to the remaining
/// journey only and nothing carries over from earlier plans.
inline PlanResult replan(const RoadGraph& g, NodeIndex current, NodeIndex target, const PlannerConfig& config)
{
  return plan(g, current, target, config);
}

inline PlanResult replan(const RoadGraph& g, std::string_view current, std::string_view target,
                         const PlannerConfig& config)
{
  return plan(g, current, target, config);
}

} // namespace covroute
