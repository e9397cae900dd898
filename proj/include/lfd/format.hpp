#pragma once

#include <string>

namespace lfd {

// Fixed 9-significant-digit rendering used by every CSV emitter.
std::string format_number(double v);

// Shortest decimal that reads back to the same double, always with a
// fractional part ("1.0", "0.95").
std::string format_exact(double v);

}  // namespace lfd
