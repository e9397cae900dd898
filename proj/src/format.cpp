#include "lfd/format.hpp"

#include <fmt/format.h>

namespace lfd {

std::string format_number(double v) {
  if (v == 0.0) {
    return "0";  // no "-0"
  }
  return fmt::format("{:.9g}", v);
}

std::string format_exact(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace lfd
