#pragma once

namespace mirt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mirt
