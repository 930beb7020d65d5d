#pragma once

#include <string>

namespace rydgate {

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace rydgate
