#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

namespace texfrac::detail {

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Write-then-rename so readers never observe a half-written file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace texfrac::detail
