#pragma once

#include <string>

namespace vegidx {

// Locale-independent number formatting used by every text artifact.

/// Fixed notation with `decimals` digits; negative zero prints as zero.
std::string format_fixed(double value, int decimals);

/// Shortest decimal that round-trips through double.
std::string format_shortest(double value);

/// Shortest decimal that round-trips through float32.
std::string format_float32(float value);

/// The float32 shortest representation re-read as a double, so JSON output
/// shows -0.45 rather than -0.44999998807907104.
double float32_as_decimal(float value);

} // namespace vegidx
