#pragma once

namespace vogellab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vogellab
