#pragma once

#include <string>

namespace qtsp {

// "%.17g": enough digits that the printed value round-trips exactly, which is
// what keeps repeated runs byte-identical across CSV and data files.
std::string fmt_double(double v);

}  // namespace qtsp
