#pragma once

namespace qdesign {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qdesign
