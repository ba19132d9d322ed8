#pragma once

#include <ostream>
#include <span>
#include <string>

namespace netstab {

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

void write_csv_row(std::ostream& os, std::span<const std::string> fields);

}  // namespace netstab
