#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's kernels, classifier, or tallies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

// Index formulas evaluated in long double, written straight from the
// definitions and clamped to [-1, 1]. nullopt on a zero denominator.
inline long double unit(long double v) { return std::clamp(v, -1.0L, 1.0L); }

inline std::optional<long double> ndvi(long double nir, long double r) {
    if (nir + r == 0) return std::nullopt;
    return unit((nir - r) / (nir + r));
}

inline std::optional<long double> savi(long double nir, long double r, long double l) {
    if (nir + r + l == 0) return std::nullopt;
    return unit((nir - r) * (1 + l) / (nir + r + l));
}

inline std::optional<long double> vari(long double g, long double r, long double b) {
    // Cancellation within float32 resolution of the inputs counts as zero.
    const long double bound = std::max(1e-12L, 0x1p-24L * (std::fabs(g) + std::fabs(r) + std::fabs(b)));
    if (std::fabs(g + r - b) < bound) return std::nullopt;
    return unit((g - r) / (g + r - b));
}

inline std::optional<long double> mgrvi(long double g, long double r) {
    if (g * g + r * r == 0) return std::nullopt;
    return unit((g * g - r * r) / (g * g + r * r));
}

// Class code by scanning the table bins (lo, hi]; non-vegetation is [-1, t0].
inline int bin_of(float v, float t0, float t1, float t2) {
    const std::array<std::pair<float, float>, 3> veg{{{t0, t1}, {t1, t2}, {t2, 1.0f}}};
    if (v >= -1.0f && v <= t0) return 1;
    for (int k = 0; k < 3; ++k)
        if (v > veg[k].first && v <= veg[k].second) return k + 2;
    return -1;
}

inline std::array<std::uint64_t, 5> tally(const std::vector<std::uint8_t>& codes) {
    std::array<std::uint64_t, 5> out{};
    for (auto c : codes) ++out.at(c);
    return out;
}

struct Agreement {
    double overall;
    double kappa;
    std::uint64_t n;
};

// Brute force over jointly valid pixels; chance agreement from the
// per-class frequencies of each labelling.
inline Agreement agreement(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) pairs.emplace_back(a[i], b[i]);
    const double n = static_cast<double>(pairs.size());
    double same = 0;
    std::map<int, double> fa, fb;
    for (auto [x, y] : pairs) {
        same += (x == y);
        fa[x] += 1;
        fb[y] += 1;
    }
    double pe = 0;
    for (auto [cls, cnt] : fa) pe += (cnt / n) * (fb.count(cls) ? fb[cls] / n : 0.0);
    const double po = same / n;
    const double kappa = pe >= 1.0 ? 1.0 : (po - pe) / (1 - pe);
    return {po, kappa, pairs.size()};
}

// Point on the pie rim at `deg` clockwise from 12 o'clock, via the
// standard counter-clockwise-from-east parametrisation.
inline std::pair<double, double> rim_point(double deg) {
    const double math_deg = 90.0 - deg;
    const double rad = math_deg * 3.14159265358979323846 / 180.0;
    return {200.0 + 160.0 * std::cos(rad), 200.0 - 160.0 * std::sin(rad)};
}

// Median of the non-nodata members of a 3x3 replicated neighbourhood;
// lower-middle on even counts. NaN means nodata.
inline float median3(const std::vector<float>& band, std::size_t w, std::size_t h, std::size_t x, std::size_t y) {
    std::vector<float> hood;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            long yy = std::clamp<long>(static_cast<long>(y) + dy, 0, static_cast<long>(h) - 1);
            long xx = std::clamp<long>(static_cast<long>(x) + dx, 0, static_cast<long>(w) - 1);
            const float v = band[static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx)];
            if (!std::isnan(v)) hood.push_back(v);
        }
    std::sort(hood.begin(), hood.end());
    return hood[(hood.size() - 1) / 2];
}

} // namespace oracle
