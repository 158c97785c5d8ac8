#pragma once

namespace poikit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poikit
