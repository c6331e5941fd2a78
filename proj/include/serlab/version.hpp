#pragma once

namespace serlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace serlab
