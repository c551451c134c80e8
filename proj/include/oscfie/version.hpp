#pragma once

namespace oscfie {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace oscfie
