#pragma once

namespace iaspa {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace iaspa
