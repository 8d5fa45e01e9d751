#pragma once

#include <cstdio>
#include <string>

namespace deltareg {

// Fixed-precision scientific formatting with 17 significant digits:
// round-trip exact for IEEE doubles, so repeated runs emit identical bytes.
inline std::string format_sci(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return std::string(buf);
}

}  // namespace deltareg
