#pragma once

namespace eacomm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eacomm
