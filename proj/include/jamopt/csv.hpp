#pragma once

#include <string>

namespace jamopt {

/// Formats a real with 12 significant digits ("%.12g").
std::string format_real(double value);

}  // namespace jamopt
