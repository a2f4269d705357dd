#pragma once

namespace jcsq {
inline constexpr const char* kVersion = "1.0.0";
}
