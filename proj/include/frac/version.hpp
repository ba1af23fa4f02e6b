#pragma once

namespace frac {

inline constexpr const char* kVersion = "0.1.0";

// per-module revision tags embedded in artifacts
inline constexpr const char* kModuleVersions =
    "torus=1;extension=1;cylinder=1;energy=1;linking=2;continuation=1;cli=1";

}  // namespace frac
