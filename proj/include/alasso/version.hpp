#pragma once

namespace alasso {

inline constexpr const char* version = "0.1.0";

}  // namespace alasso
