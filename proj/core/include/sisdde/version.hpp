#pragma once

namespace sisdde {
inline constexpr const char* kVersion = "0.1.0";
}
