#pragma once

namespace span_shrink {
inline constexpr const char* kVersion = "1.0.0";
}
