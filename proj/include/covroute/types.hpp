#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace covroute {

using Seconds = double;
using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent road graph input.
class GraphError : public Error
{
public:
  using Error::Error;
};

class UnknownNode : public Error
{
public:
  explicit UnknownNode(std::string id)
    : Error("unknown node '" + id + "'"), id_(std::move(id))
  {}

  const std::string& id() const noexcept { return id_; }

private:
  std::string id_;
};

/// A duration budget in seconds, or the explicit "unbounded" sentinel.
/// Unbounded compares greater than every finite budget.
class Budget
{
public:
  constexpr Budget() = default;

  static constexpr Budget unbounded() { return Budget{}; }

  static Budget of(Seconds limit)
  {
    if (!std::isfinite(limit) || limit < 0)
      throw std::invalid_argument("budget must be a finite, nonnegative number of seconds");
    Budget b;
    b.limit_ = limit;
    return b;
  }

  bool is_unbounded() const noexcept { return !limit_.has_value(); }

  // Precondition: bounded.
  Seconds value() const { return limit_.value(); }

  // "Must not exceed" is inclusive.
  bool admits(Seconds amount) const noexcept { return !limit_ || amount <= *limit_; }

  Budget scaled(double factor) const { return limit_ ? of(*limit_ * factor) : unbounded(); }

  friend bool operator==(const Budget&, const Budget&) = default;

  friend bool operator<(const Budget& a, const Budget& b) noexcept
  {
    if (a.is_unbounded())
      return false;
    return b.is_unbounded() || *a.limit_ < *b.limit_;
  }
  friend bool operator<=(const Budget& a, const Budget& b) noexcept { return !(b < a); }
  friend bool operator>(const Budget& a, const Budget& b) noexcept { return b < a; }

private:
  std::optional<Seconds> limit_;
};

inline std::string to_string(const Budget& b)
{
  return b.is_unbounded() ? std::string("inf") : std::to_string(b.value());
}

} // namespace covroute
