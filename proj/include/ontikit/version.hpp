#pragma once

namespace ontikit {
inline constexpr const char* kVersion = "0.1.0";
}
