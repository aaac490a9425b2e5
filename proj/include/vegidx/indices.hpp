#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "vegidx/raster.hpp"

namespace vegidx {

enum class Index { Ndvi, Savi, Vari, Mgrvi };

inline constexpr std::array<Index, 4> kAllIndices{Index::Ndvi, Index::Savi, Index::Vari, Index::Mgrvi};

std::string_view index_name(Index index);            // "ndvi", ...
std::string_view index_label(Index index);           // "NDVI", ...
Index parse_index(std::string_view name);            // case-insensitive; throws InvalidConfig
bool needs_nir(Index index) noexcept;

struct IndexKind {
    Index index = Index::Ndvi;
    double savi_l = 0.5; // SAVI soil brightness correction, ignored otherwise

    void validate() const;
    friend bool operator==(const IndexKind&, const IndexKind&) = default;
};

struct IndexRaster {
    RasterGrid grid; // single band float32, NaN nodata
    IndexKind kind;
};

// Per-pixel kernels in double precision. nullopt marks a degenerate
// denominator; results are clamped into [-1, 1].
namespace kernel {

inline double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

inline std::optional<double> ndvi(double nir, double red) {
    const double den = nir + red;
    if (den == 0.0) return std::nullopt;
    return clamp_unit((nir - red) / den);
}

inline std::optional<double> savi(double nir, double red, double l) {
    const double den = nir + red + l;
    if (den == 0.0) return std::nullopt;
    return clamp_unit(((nir - red) * (1.0 + l)) / den);
}

inline constexpr double kVariEpsilon = 1e-12;

/// Largest |G + R - B| that float32 rounding of the three inputs can
/// produce from an exactly cancelling triple.
inline double vari_cancellation_bound(double green, double red, double blue) {
    constexpr double half_ulp = 0.5 * static_cast<double>(std::numeric_limits<float>::epsilon());
    return std::max(kVariEpsilon, half_ulp * (std::abs(green) + std::abs(red) + std::abs(blue)));
}

inline std::optional<double> vari(double green, double red, double blue) {
    const double den = green + red - blue;
    if (std::abs(den) < vari_cancellation_bound(green, red, blue)) return std::nullopt;
    return clamp_unit((green - red) / den);
}

inline std::optional<double> mgrvi(double green, double red) {
    const double g2 = green * green;
    const double r2 = red * red;
    const double den = g2 + r2;
    if (den == 0.0) return std::nullopt;
    return clamp_unit((g2 - r2) / den);
}

} // namespace kernel

IndexRaster compute_ndvi(const RasterGrid& grid, const BandSet& bands, unsigned workers = 1);
IndexRaster compute_savi(const RasterGrid& grid, const BandSet& bands, double l, unsigned workers = 1);
IndexRaster compute_vari(const RasterGrid& grid, const BandSet& bands, unsigned workers = 1);
IndexRaster compute_mgrvi(const RasterGrid& grid, const BandSet& bands, unsigned workers = 1);

/// Dispatches on kind.index.
IndexRaster compute_index(const RasterGrid& grid, const BandSet& bands, const IndexKind& kind,
                          unsigned workers = 1);

/// Recovers an IndexRaster from a grid written by write_vgr; the kind is
/// read from the "index"/"savi_l" meta keys.
IndexRaster index_raster_from_grid(RasterGrid grid);

} // namespace vegidx
