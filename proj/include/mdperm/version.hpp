#pragma once

namespace mdperm {

inline constexpr const char* kToolName = "mdperm";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace mdperm
