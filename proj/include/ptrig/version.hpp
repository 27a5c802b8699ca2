#pragma once

namespace ptrig {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ptrig
