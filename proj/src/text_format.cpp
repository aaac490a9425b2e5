#include "vegidx/text_format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace vegidx {

std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (ec != std::errc()) return "nan";
    std::string s(buf, ptr);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string format_shortest(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string format_float32(float value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

double float32_as_decimal(float value) {
    if (!std::isfinite(value)) return static_cast<double>(value);
    const std::string s = format_float32(value);
    double out = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

} // namespace vegidx
