#pragma once

namespace rgauge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rgauge
