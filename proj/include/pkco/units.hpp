#pragma once

namespace pkco {

/// All times in the library are SI seconds.
using Seconds = double;

inline constexpr Seconds kMicrosecond = 1e-6;
inline constexpr Seconds kMillisecond = 1e-3;

}  // namespace pkco
