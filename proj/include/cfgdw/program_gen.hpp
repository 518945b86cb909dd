#pragma once

#include <cstdint>
#include <string>

namespace cfgdw {

/// Pseudo-random structured program with about `size` statements: nested
/// while/do-while loops, if/else, and break/continue/return placed so that
/// every loop exit and stop stay reachable. Identical (seed, size) give
/// identical text. size = 1 yields a single assignment.
std::string generate_random_program(std::uint64_t seed, int size);

} // namespace cfgdw
