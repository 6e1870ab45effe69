#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace entangle {

/// Shortest round-trip decimal form; locale independent, so report files are
/// byte-stable across runs and machines.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

/// Quotes a CSV field only when it needs it.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace entangle
