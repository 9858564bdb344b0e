#pragma once

namespace drawcal {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace drawcal
