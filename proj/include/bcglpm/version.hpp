#pragma once

namespace bcglpm {

inline constexpr const char* version = "0.1.0";

}  // namespace bcglpm
