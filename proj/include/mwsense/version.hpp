#pragma once

namespace mwsense {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mwsense
