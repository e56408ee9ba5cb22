#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace davn::csv {

/// Dataset float dialect: 9 significant digits.
inline std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Empty field marks an undefined value.
inline std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

}  // namespace davn::csv
