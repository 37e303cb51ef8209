#pragma once

namespace spdeconv {

inline constexpr const char* kVersion = "0.1.0";

} // namespace spdeconv
