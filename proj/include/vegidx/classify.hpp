#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "vegidx/indices.hpp"
#include "vegidx/raster.hpp"

namespace vegidx {

enum class HealthClass : std::uint8_t {
    Nodata = 0,
    NonVegetation = 1,
    Stress = 2,
    Moderate = 3,
    Dense = 4,
};

inline constexpr std::size_t kClassCount = 5;

std::string_view class_key(HealthClass c);   // "non_vegetation", "stress", ...
std::string_view class_label(HealthClass c); // "non-vegetation", "stress", ...

/// Bin edges t0 < t1 < t2 inside [-1, 1]. Bins are lower-exclusive and
/// upper-inclusive: v <= t0 is non-vegetation, t0 < v <= t1 stress, and
/// so on. Comparison happens in float32, the precision of index rasters.
struct ThresholdSet {
    double t0 = 0.1;
    double t1 = 0.3;
    double t2 = 0.6;

    void validate() const;
    friend bool operator==(const ThresholdSet&, const ThresholdSet&) = default;

    static ThresholdSet defaults_for(Index index);
};

/// Class code for one index value under `t`; value must be valid.
inline HealthClass classify_value(float v, float t0, float t1, float t2) noexcept {
    if (v <= t0) return HealthClass::NonVegetation;
    if (v <= t1) return HealthClass::Stress;
    if (v <= t2) return HealthClass::Moderate;
    return HealthClass::Dense;
}

struct ClassRaster {
    RasterGrid grid; // single band uint8, nodata 0
    ThresholdSet thresholds;
    IndexKind source_kind;
};

ClassRaster classify(const IndexRaster& index, const ThresholdSet& thresholds, unsigned workers = 1);

/// Reads {"t0","t1","t2"} from a JSON file; no path yields the defaults.
ThresholdSet load_thresholds(const std::optional<std::filesystem::path>& path, const IndexKind& kind);
ThresholdSet parse_thresholds(std::string_view json_text);

/// Recovers a ClassRaster from a grid written by write_vgr.
ClassRaster class_raster_from_grid(RasterGrid grid);

} // namespace vegidx
