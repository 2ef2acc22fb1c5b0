#pragma once

#include <charconv>
#include <string>

namespace gmeasure {

/// Locale-independent shortest-faithful decimal rendering ('.' separator,
/// round-trips in double) for deterministic CSV/JSON output.
inline std::string numfmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace gmeasure
