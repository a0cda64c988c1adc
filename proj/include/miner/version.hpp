#ifndef MINER_VERSION_HPP
#define MINER_VERSION_HPP

namespace miner {

inline constexpr const char* kToolName = "narrative-miner";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace miner

#endif  // MINER_VERSION_HPP
