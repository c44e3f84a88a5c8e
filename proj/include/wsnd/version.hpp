#pragma once

namespace wsnd {
inline constexpr const char* kVersion = "0.1.0";
}
