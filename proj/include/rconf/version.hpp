#pragma once

namespace rconf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rconf
