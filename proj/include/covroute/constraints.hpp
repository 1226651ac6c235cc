#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "covroute/graph.hpp"
#include "covroute/ksp.hpp"

namespace covroute {

/// D1 bounds total breakage along a path, D2 the longest contiguous run.
struct Requirements
{
  Budget d1 = Budget::unbounded();
  Budget d2 = Budget::unbounded();
};

/// Geometric growth of D1 (factor `growth`) capped at `ceiling`.
struct RelaxationPolicy
{
  double growth = 1.2;
  Budget ceiling = Budget::unbounded();

  void validate(Budget initial_d1) const
  {
    if (!std::isfinite(growth) || growth <= 1)
      throw std::invalid_argument("relaxation growth coefficient must be > 1");
    if (!initial_d1.is_unbounded() && ceiling.is_unbounded())
      throw std::invalid_argument("relaxation ceiling must be finite when D1 is finite");
    if (ceiling < initial_d1)
      throw std::invalid_argument("relaxation ceiling must be >= D1");
  }
};

/// Uniform grid of `rows` D1 values over [beta_low*D1, beta_high*D1].
struct SweepPolicy
{
  double beta_low = 1.0;
  double beta_high = 1.0;
  unsigned rows = 1;

  void validate() const
  {
    if (!std::isfinite(beta_low) || beta_low <= 0)
      throw std::invalid_argument("beta1 must be > 0");
    if (!std::isfinite(beta_high) || beta_high < beta_low)
      throw std::invalid_argument("beta2 must be >= beta1");
    if (rows == 0)
      throw std::invalid_argument("sweep needs at least one row");
  }

  std::vector<Budget> grid(Budget base) const
  {
    validate();
    std::vector<Budget> values;
    values.reserve(rows);
    if (base.is_unbounded()) {
      values.assign(rows, Budget::unbounded());
      return values;
    }
    const Seconds d1 = base.value();
    if (rows == 1) {
      values.push_back(Budget::of(beta_low * d1));
      return values;
    }
    for (unsigned i = 0; i < rows; ++i)
      values.push_back(Budget::of(beta_low * d1 + i * (beta_high - beta_low) * d1 / (rows - 1)));
    return values;
  }
};

struct CandidateRow
{
  Budget d1;
  std::vector<Path> paths;
};

struct CandidateMatrix
{
  std::vector<CandidateRow> rows;

  bool empty() const
  {
    for (const auto& r : rows)
      if (!r.paths.empty())
        return false;
    return true;
  }
};

inline Seconds breakage_total(const RoadGraph& g, const Path& p)
{
  Seconds total = 0;
  for (EdgeIndex e : p.edges) {
    const auto& edge = g.edge(e);
    for (std::size_t i = 0; i < edge.segments.size(); ++i)
      if (!edge.segments[i].covered)
        total += edge.segment_duration(i);
  }
  return total;
}

inline Seconds breakage_max_run(const RoadGraph& g, const Path& p)
{
  Seconds worst = 0;
  for (const auto& run : coverage_runs(g, p))
    if (!run.covered)
      worst = std::max(worst, run.duration);
  return worst;
}

inline bool within_total_budget(const RoadGraph& g, const Path& p, Budget d1) { return d1.admits(breakage_total(g, p)); }
inline bool within_run_budget(const RoadGraph& g, const Path& p, Budget d2) { return d2.admits(breakage_max_run(g, p)); }

struct PathMetrics
{
  Seconds duration = 0;
  Seconds breakage = 0;
  Seconds max_run = 0;

  bool satisfies(Budget d1, Budget d2) const { return d1.admits(breakage) && d2.admits(max_run); }
};

inline PathMetrics measure(const RoadGraph& g, const Path& p)
{
  return {path_duration(g, p), breakage_total(g, p), breakage_max_run(g, p)};
}

/// Draws paths from one PathStream and remembers them, so every D1 value of
/// the relaxation schedule and the sweep reads the same enumeration.
/// `scan_limit` caps how many raw paths are ever drawn; hitting it is treated
/// like exhaustion.
class CandidatePool
{
public:
  struct Entry
  {
    Path path;
    PathMetrics metrics;
  };

  static constexpr std::size_t kDefaultScanLimit = 100000;

  CandidatePool(const RoadGraph& g, NodeIndex source, NodeIndex target,
                std::size_t scan_limit = kDefaultScanLimit)
    : stream_(g, source, target), scan_limit_(scan_limit)
  {}

  const Entry* at(std::size_t i)
  {
    while (entries_.size() <= i) {
      if (entries_.size() >= scan_limit_)
        return nullptr;
      auto p = stream_.next();
      if (!p)
        return nullptr;
      auto metrics = measure(stream_.graph(), *p);
      entries_.push_back({std::move(*p), metrics});
    }
    return &entries_[i];
  }

  const RoadGraph& graph() const { return stream_.graph(); }
  NodeIndex source() const { return stream_.source(); }
  NodeIndex target() const { return stream_.target(); }
  std::size_t drawn() const { return entries_.size(); }

private:
  PathStream stream_;
  std::deque<Entry> entries_;
  std::size_t scan_limit_;
};

/// First `k` paths of the stream that satisfy both requirements, in stream
/// order. Fewer than `k` only when the stream runs dry.
inline std::vector<Path> collect_candidates(PathStream& stream, const Requirements& req, std::size_t k)
{
  std::vector<Path> out;
  while (out.size() < k) {
    auto p = stream.next();
    if (!p)
      break;
    if (measure(stream.graph(), *p).satisfies(req.d1, req.d2))
      out.push_back(std::move(*p));
  }
  return out;
}

inline std::vector<Path> collect_candidates(CandidatePool& pool, const Requirements& req, std::size_t k)
{
  std::vector<Path> out;
  for (std::size_t i = 0; out.size() < k; ++i) {
    const auto* entry = pool.at(i);
    if (!entry)
      break;
    if (entry->metrics.satisfies(req.d1, req.d2))
      out.push_back(entry->path);
  }
  return out;
}

/// D1 values tried by relaxation: d1, g*d1, g^2*d1, ... while <= ceiling.
/// A zero or unbounded D1 cannot grow, so its schedule is that single value.
inline std::vector<Budget> relaxation_schedule(Budget d1, const RelaxationPolicy& policy)
{
  policy.validate(d1);
  std::vector<Budget> schedule{d1};
  if (d1.is_unbounded() || d1.value() == 0)
    return schedule;
  for (Seconds next = d1.value() * policy.growth; next <= policy.ceiling.value(); next *= policy.growth)
    schedule.push_back(Budget::of(next));
  return schedule;
}

enum class RelaxStatus
{
  found,       // k paths at effective_d1
  partial,     // at least one, fewer than k, stream exhausted
  best_effort, // nothing feasible; unconstrained shortest path substituted
  unreachable  // no source-target path at all
};

struct RelaxOutcome
{
  std::vector<Path> paths;
  Budget effective_d1;
  RelaxStatus status = RelaxStatus::unreachable;
};

/// Runs the relaxation schedule over a shared pool. The best-effort path is
/// searched in `fallback`, which must share node indices with the pool graph.
inline RelaxOutcome relax_until_found(CandidatePool& pool, const RoadGraph& fallback, const Requirements& req,
                                      std::size_t k, const RelaxationPolicy& policy)
{
  if (k == 0)
    throw std::invalid_argument("k must be positive");
  RelaxOutcome out;
  for (Budget d1 : relaxation_schedule(req.d1, policy)) {
    out.effective_d1 = d1;
    out.paths = collect_candidates(pool, Requirements{d1, req.d2}, k);
    if (!out.paths.empty()) {
      out.status = out.paths.size() == k ? RelaxStatus::found : RelaxStatus::partial;
      return out;
    }
  }
  if (auto p = shortest_path(fallback, pool.source(), pool.target())) {
    out.paths = {std::move(*p)};
    out.status = RelaxStatus::best_effort;
  } else {
    out.status = RelaxStatus::unreachable;
  }
  return out;
}

inline RelaxOutcome relax_until_found(const RoadGraph& g, NodeIndex source, NodeIndex target,
                                      const Requirements& req, std::size_t k, const RelaxationPolicy& policy,
                                      std::size_t scan_limit = CandidatePool::kDefaultScanLimit)
{
  CandidatePool pool(g, source, target, scan_limit);
  return relax_until_found(pool, g, req, k, policy);
}

/// One row per grid value, ascending; each row holds up to k paths valid at
/// that D1 and the fixed D2. No relaxation happens inside the sweep.
inline CandidateMatrix sweep(CandidatePool& pool, Budget base_d1, Budget d2, std::size_t k,
                             const SweepPolicy& policy)
{
  if (k == 0)
    throw std::invalid_argument("k must be positive");
  CandidateMatrix m;
  for (Budget d1 : policy.grid(base_d1))
    m.rows.push_back({d1, collect_candidates(pool, Requirements{d1, d2}, k)});
  return m;
}

inline CandidateMatrix sweep(const RoadGraph& g, NodeIndex source, NodeIndex target, Budget base_d1, Budget d2,
                             std::size_t k, const SweepPolicy& policy,
                             std::size_t scan_limit = CandidatePool::kDefaultScanLimit)
{
  CandidatePool pool(g, source, target, scan_limit);
  return sweep(pool, base_d1, d2, k, policy);
}

} // namespace covroute
