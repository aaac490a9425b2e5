#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vegidx/classify.hpp"
#include "vegidx/stats.hpp"

namespace vegidx {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ColorTable {
    std::array<Rgb, kClassCount> colors{{
        {0, 0, 0},        // nodata
        {120, 108, 92},   // non-vegetation
        {214, 69, 56},    // stress
        {237, 201, 72},   // moderate
        {46, 139, 46},    // dense
    }};

    const Rgb& operator[](HealthClass c) const { return colors[static_cast<std::size_t>(c)]; }
};

/// Binary PPM (P6) image of the class codes.
std::vector<std::uint8_t> encode_health_map(const RasterGrid& classes, const ColorTable& colors,
                                            unsigned workers = 1);
void render_health_map(const ClassRaster& classes, const ColorTable& colors,
                       const std::filesystem::path& path, unsigned workers = 1);

enum class PieMode { Total, Vegetation };

PieMode parse_pie_mode(std::string_view name);

/// Geometry of one pie slice, angles in degrees clockwise from 12 o'clock.
struct PieSlice {
    HealthClass cls;
    double start_deg;
    double sweep_deg;
    double pct; // two-decimal export value used in the label
};

std::vector<PieSlice> pie_slices(const ClassStats& stats, PieMode mode);

std::string render_pie_svg(const ClassStats& stats, const ColorTable& colors, PieMode mode);
void render_pie(const ClassStats& stats, const ColorTable& colors, const std::filesystem::path& path,
                PieMode mode);

/// Stand-in vegetation pie for a raster with no vegetated pixels, so a
/// pipeline run still emits its full artifact set.
std::string render_empty_vegetation_pie_svg(Index index);

} // namespace vegidx
