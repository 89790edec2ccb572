#pragma once

namespace hardedge {

inline constexpr const char* version = "0.1.0";

}  // namespace hardedge
