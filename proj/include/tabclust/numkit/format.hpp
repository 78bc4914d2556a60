#pragma once

#include <string>

namespace tabclust::numkit {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

// Round half up to one decimal place ("90.157" -> "90.2", "4.25" -> "4.3").
std::string format_fixed1(double v);

}  // namespace tabclust::numkit
