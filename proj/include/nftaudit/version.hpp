#pragma once

namespace nftaudit {

// Reported by the CLI and stamped into report headers. Bump on any change to
// report content or field semantics so consumers can pin what they parse.
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace nftaudit
