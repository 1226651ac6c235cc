#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "covroute/json_fixed.hpp"
#include "covroute/planner.hpp"

namespace covroute {

/// Named planner defaults for the two stroke transport scenarios. The
/// numbers are illustrative operating points, not clinical guidance.
struct DiseasePreset
{
  std::string_view name;
  double alpha;
  Seconds d1;
  Seconds d2;
};

// hemorrhagic: transport time dominates. ischemic: monitoring dominates.
inline constexpr std::array<DiseasePreset, 2> kPresets{{
  {"hemorrhagic", 0.5, 900, 600},
  {"ischemic", 4.0, 600, 360},
}};

inline const DiseasePreset* find_preset(std::string_view name)
{
  for (const auto& p : kPresets)
    if (p.name == name)
      return &p;
  return nullptr;
}

/// Parses "inf" / "unbounded" or a nonnegative number of seconds.
inline Budget parse_budget(std::string_view text)
{
  if (text == "inf" || text == "unbounded" || text == "infinity")
    return Budget::unbounded();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(std::string(text), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid budget '" + std::string(text) + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("invalid budget '" + std::string(text) + "'");
  return Budget::of(v);
}

/// Planner knobs as supplied by a caller; unset fields fall back to the
/// preset (if any) and then to the built-in defaults.
struct PlanOptions
{
  std::optional<std::string> preset;
  std::optional<double> alpha;
  std::optional<Budget> d1;
  std::optional<Budget> d2;
  std::optional<std::size_t> k;
  std::optional<double> relax_d;
  std::optional<Budget> relax_max;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<unsigned> h;
  std::optional<std::size_t> scan_limit;

  PlannerConfig resolve() const
  {
    PlannerConfig cfg;
    if (preset) {
      const auto* p = find_preset(*preset);
      if (!p)
        throw std::invalid_argument("unknown preset '" + *preset + "'");
      cfg.alpha = Alpha(p->alpha);
      cfg.requirements.d1 = Budget::of(p->d1);
      cfg.requirements.d2 = Budget::of(p->d2);
    }
    if (alpha)
      cfg.alpha = Alpha(*alpha);
    if (d1)
      cfg.requirements.d1 = *d1;
    if (d2)
      cfg.requirements.d2 = *d2;
    if (k)
      cfg.k = *k;
    if (relax_d)
      cfg.relaxation.growth = *relax_d;
    // Default ceiling: four times D1.
    cfg.relaxation.ceiling = relax_max ? *relax_max : cfg.requirements.d1.scaled(4.0);
    if (beta1)
      cfg.sweep.beta_low = *beta1;
    if (beta2)
      cfg.sweep.beta_high = *beta2;
    if (h)
      cfg.sweep.rows = *h;
    if (scan_limit)
      cfg.scan_limit = *scan_limit;
    cfg.validate();
    return cfg;
  }
};

inline Budget budget_from_json(const Json& j)
{
  if (j.is_null())
    return Budget::unbounded();
  if (j.is_string())
    return parse_budget(j.get<std::string>());
  return Budget::of(j.get<double>());
}

/// Reads the planner keys of a request body: preset, alpha, d1_s, d2_s, k,
/// relax_d, relax_max_s, beta1, beta2, h, scan_limit.
inline PlanOptions plan_options_from_json(const Json& j)
{
  PlanOptions o;
  if (j.contains("preset"))
    o.preset = j["preset"].get<std::string>();
  if (j.contains("alpha"))
    o.alpha = j["alpha"].get<double>();
  if (j.contains("d1_s"))
    o.d1 = budget_from_json(j["d1_s"]);
  if (j.contains("d2_s"))
    o.d2 = budget_from_json(j["d2_s"]);
  if (j.contains("k"))
    o.k = j["k"].get<std::size_t>();
  if (j.contains("relax_d"))
    o.relax_d = j["relax_d"].get<double>();
  if (j.contains("relax_max_s"))
    o.relax_max = budget_from_json(j["relax_max_s"]);
  if (j.contains("beta1"))
    o.beta1 = j["beta1"].get<double>();
  if (j.contains("beta2"))
    o.beta2 = j["beta2"].get<double>();
  if (j.contains("h"))
    o.h = j["h"].get<unsigned>();
  if (j.contains("scan_limit"))
    o.scan_limit = j["scan_limit"].get<std::size_t>();
  return o;
}

} // namespace covroute
