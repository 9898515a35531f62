#pragma once
#include <string>

namespace edgelab {

// shortest round-trip decimal form, independent of the global locale
std::string format_double(double x);

}
