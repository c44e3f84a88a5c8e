#pragma once

#include <string>

namespace wsnd {

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

} // namespace wsnd
