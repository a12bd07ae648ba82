#pragma once

namespace besovlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace besovlab
