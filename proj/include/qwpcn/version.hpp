#pragma once

namespace qwpcn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qwpcn
