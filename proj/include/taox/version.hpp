#pragma once

namespace taox {

inline constexpr const char* kVersion = "0.1.0";

} // namespace taox
