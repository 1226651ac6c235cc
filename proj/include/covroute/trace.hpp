#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "covroute/graph.hpp"

namespace covroute {

class TraceError : public Error
{
public:
  TraceError(std::size_t row, const std::string& what)
    : Error("trace row " + std::to_string(row) + ": " + what), row_(row)
  {}
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

struct EdgeRef
{
  std::string from;
  std::string to;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Resolves to the first edge from -> to in insertion order.
inline EdgeIndex resolve_edge(const RoadGraph& g, const EdgeRef& ref)
{
  auto from = g.find_node(ref.from);
  auto to = g.find_node(ref.to);
  std::optional<EdgeIndex> e;
  if (from && to)
    e = g.find_edge(*from, *to);
  if (!e)
    throw Error("unknown edge reference " + ref.from + "->" + ref.to);
  return *e;
}

struct TraceSample
{
  Seconds timestamp_s = 0;
  std::string route_id;
  EdgeRef edge_ref;
  EdgeIndex edge = 0;
  double offset = 0; // position along the edge, [0, 1]
  double bandwidth_kbps = 0;
};

/// Bandwidth >= threshold enters "covered"; leaving it needs a drop below
/// threshold - hysteresis. Runs shorter than min_segment_s are absorbed.
struct LabelingPolicy
{
  double threshold_kbps = 256;
  double hysteresis_kbps = 64;
  Seconds min_segment_s = 8;

  void validate() const
  {
    if (!(threshold_kbps > 0) || !std::isfinite(threshold_kbps))
      throw std::invalid_argument("threshold must be > 0");
    if (!(hysteresis_kbps >= 0) || hysteresis_kbps >= threshold_kbps)
      throw std::invalid_argument("hysteresis must be in [0, threshold)");
    if (!(min_segment_s >= 0) || !std::isfinite(min_segment_s))
      throw std::invalid_argument("min segment must be >= 0");
  }
};

inline constexpr std::string_view kTraceHeader = "timestamp_s,route_id,from,to,offset,bandwidth_kbps";

namespace detail {

inline double parse_number(std::string_view field, std::size_t row, const char* name)
{
  // from_chars for double is available in libstdc++ 11.
  double v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty() || !std::isfinite(v))
    throw TraceError(row, std::string("malformed ") + name + " '" + std::string(field) + "'");
  return v;
}

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
    s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ')
    s.remove_prefix(1);
  return s;
}

} // namespace detail

/// Reads the trace CSV, validating each row against `g`. Rows are numbered
/// from 1 with the header as row 1. Result is sorted by timestamp (stable).
inline std::vector<TraceSample> parse_trace(std::istream& in, const RoadGraph& g)
{
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line) || detail::trim(line) != kTraceHeader)
    throw TraceError(1, "expected header '" + std::string(kTraceHeader) + "'");

  std::vector<TraceSample> samples;
  while (std::getline(in, line)) {
    ++row;
    const auto text = detail::trim(line);
    if (text.empty())
      continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(detail::trim(text.substr(start, comma - start)));
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    if (fields.size() != 6)
      throw TraceError(row, "expected 6 fields, got " + std::to_string(fields.size()));

    TraceSample s;
    s.timestamp_s = detail::parse_number(fields[0], row, "timestamp");
    s.route_id = std::string(fields[1]);
    s.edge_ref = {std::string(fields[2]), std::string(fields[3])};
    s.offset = detail::parse_number(fields[4], row, "offset");
    s.bandwidth_kbps = detail::parse_number(fields[5], row, "bandwidth");
    if (s.offset < 0 || s.offset > 1)
      throw TraceError(row, "offset outside [0,1]");
    if (s.bandwidth_kbps < 0)
      throw TraceError(row, "negative bandwidth");
    try {
      s.edge = resolve_edge(g, s.edge_ref);
    } catch (const Error& ex) {
      throw TraceError(row, ex.what());
    }
    samples.push_back(std::move(s));
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const TraceSample& a, const TraceSample& b) { return a.timestamp_s < b.timestamp_s; });
  return samples;
}

/// Coverage segments for one edge from its samples. Each sample holds from
/// its offset up to the next sample's offset (the first also covers the
/// start of the edge).
inline std::vector<CoverageSegment> label_edge(std::span<const TraceSample> input, const LabelingPolicy& policy,
                                               Seconds edge_duration)
{
  policy.validate();
  if (input.empty())
    throw std::invalid_argument("label_edge needs at least one sample");
  std::vector<TraceSample> samples(input.begin(), input.end());
  std::stable_sort(samples.begin(), samples.end(),
                   [](const TraceSample& a, const TraceSample& b) { return a.offset < b.offset; });

  struct Run
  {
    double begin;
    double end;
    bool covered;
    double length() const { return end - begin; }
  };
  std::vector<Run> runs;
  const double exit_below = policy.threshold_kbps - policy.hysteresis_kbps;
  bool covered = samples.front().bandwidth_kbps >= policy.threshold_kbps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double bw = samples[i].bandwidth_kbps;
    if (covered && bw < exit_below)
      covered = false;
    else if (!covered && bw >= policy.threshold_kbps)
      covered = true;
    const double begin = i == 0 ? 0.0 : samples[i].offset;
    const double end = i + 1 < samples.size() ? samples[i + 1].offset : 1.0;
    if (end <= begin)
      continue;
    if (!runs.empty() && runs.back().covered == covered)
      runs.back().end = end;
    else
      runs.push_back({begin, end, covered});
  }
  if (runs.empty()) // every sample sits at offset 1
    runs.push_back({0.0, 1.0, covered});

  // Absorb the shortest too-short run into its longer neighbour (left on a
  // tie) until none remain.
  const double min_fraction = edge_duration > 0 ? policy.min_segment_s / edge_duration : 0.0;
  while (runs.size() > 1) {
    auto shortest = std::min_element(runs.begin(), runs.end(),
                                     [](const Run& a, const Run& b) { return a.length() < b.length(); });
    if (!(shortest->length() < min_fraction))
      break;
    const auto i = static_cast<std::size_t>(shortest - runs.begin());
    std::size_t into;
    if (i == 0)
      into = 1;
    else if (i + 1 == runs.size())
      into = i - 1;
    else
      into = runs[i + 1].length() > runs[i - 1].length() ? i + 1 : i - 1;
    runs[i].covered = runs[into].covered;

    std::vector<Run> merged;
    for (const auto& r : runs) {
      if (!merged.empty() && merged.back().covered == r.covered)
        merged.back().end = r.end;
      else
        merged.push_back(r);
    }
    runs = std::move(merged);
  }

  std::vector<CoverageSegment> segments;
  for (const auto& r : runs)
    segments.push_back({r.length(), r.covered});
  return normalize_segments(std::move(segments));
}

/// Labels every edge that has at least one sample.
inline std::map<EdgeIndex, std::vector<CoverageSegment>>
label_trace(const RoadGraph& g, std::span<const TraceSample> samples, const LabelingPolicy& policy)
{
  std::map<EdgeIndex, std::vector<TraceSample>> by_edge;
  for (const auto& s : samples)
    by_edge[s.edge].push_back(s);
  std::map<EdgeIndex, std::vector<CoverageSegment>> labels;
  for (const auto& [edge, group] : by_edge)
    labels[edge] = label_edge(group, policy, g.edge(edge).duration);
  return labels;
}

inline RoadGraph apply_labels(const RoadGraph& g, const std::map<EdgeIndex, std::vector<CoverageSegment>>& labels)
{
  RoadGraph out = g;
  for (const auto& [edge, segments] : labels) {
    if (edge >= g.edge_count())
      throw Error("unknown edge reference #" + std::to_string(edge));
    out.set_segments(edge, segments);
  }
  return out;
}

inline RoadGraph apply_labels(const RoadGraph& g, const std::map<EdgeRef, std::vector<CoverageSegment>>& labels)
{
  std::map<EdgeIndex, std::vector<CoverageSegment>> resolved;
  for (const auto& [ref, segments] : labels)
    resolved[resolve_edge(g, ref)] = segments;
  return apply_labels(g, resolved);
}

} // namespace covroute
