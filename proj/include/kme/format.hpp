#pragma once

#include <string>

namespace kme {

/// Locale-independent decimal with 15 significant digits ("%.15g" style).
std::string format_real(double x);
/// Shortest locale-independent decimal that round-trips exactly.
std::string format_exact(double x);
/// Locale-independent parse of a full token; throws InputError otherwise.
double parse_real(const std::string& token);
long long parse_integer(const std::string& token);

}  // namespace kme
