#pragma once

#include <string>

namespace ontic {

/// Shortest-round-trip-safe text for a double: printf "%.17g".
std::string format_real(double v);

}  // namespace ontic
