#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace emvm {

// Shortest representation that round-trips through a double. Used for every
// number the CLI emits so that identical runs produce byte-identical output
// regardless of locale or stream state.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;  // 32 chars always suffice for the shortest form
    return std::string(buf, ptr);
}

}  // namespace emvm
