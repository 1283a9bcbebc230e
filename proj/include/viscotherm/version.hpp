#pragma once

namespace viscotherm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace viscotherm
