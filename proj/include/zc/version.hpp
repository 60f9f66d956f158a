#pragma once

namespace zc {
inline constexpr const char* kVersion = "1.0.0";
}
