#include "tabclust/numkit/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace tabclust::numkit {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

std::string format_fixed1(double v) {
    const double rounded = std::floor(v * 10.0 + 0.5) / 10.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", rounded == 0.0 ? 0.0 : rounded);
    return buf;
}

}  // namespace tabclust::numkit
