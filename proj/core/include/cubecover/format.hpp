#pragma once

#include <string>

namespace cubecover {

/// printf-style %.{significant}g rendering, used by every CSV writer.
std::string format_number(double value, int significant = 17);

}  // namespace cubecover
