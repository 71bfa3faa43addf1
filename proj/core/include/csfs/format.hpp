#pragma once

#include <string>
#include <string_view>

namespace csfs {

// Shortest representation that round-trips to the same double.
std::string format_double(double value);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace csfs
