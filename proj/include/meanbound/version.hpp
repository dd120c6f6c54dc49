#pragma once

namespace meanbound {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace meanbound
