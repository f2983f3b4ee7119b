#include "jamopt/csv.hpp"

#include <cstdio>

namespace jamopt {

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace jamopt
