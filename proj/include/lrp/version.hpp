#pragma once

namespace lrp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lrp
