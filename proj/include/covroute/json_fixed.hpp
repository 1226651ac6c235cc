#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace covroute {

using Json = nlohmann::ordered_json;

/// Compact JSON with every floating-point value printed as %.6f, so output
/// bytes depend only on the document. Non-finite floats become null.
inline void write_fixed_json(std::ostream& os, const Json& j)
{
  switch (j.type()) {
  case Json::value_t::object: {
    os << '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        os << ',';
      first = false;
      os << Json(it.key()).dump() << ':';
      write_fixed_json(os, it.value());
    }
    os << '}';
    break;
  }
  case Json::value_t::array: {
    os << '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first)
        os << ',';
      first = false;
      write_fixed_json(os, v);
    }
    os << ']';
    break;
  }
  case Json::value_t::number_float: {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      os << "null";
      break;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    // Avoid "-0.000000".
    if (std::string_view(buf) == "-0.000000")
      os << "0.000000";
    else
      os << buf;
    break;
  }
  default:
    os << j.dump();
  }
}

inline std::string fixed_json(const Json& j)
{
  std::ostringstream os;
  write_fixed_json(os, j);
  return os.str();
}

} // namespace covroute
