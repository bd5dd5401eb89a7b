#pragma once

namespace tsdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tsdyn
