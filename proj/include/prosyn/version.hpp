#pragma once

namespace prosyn {
inline constexpr const char* kVersion = "0.1.0";
}
