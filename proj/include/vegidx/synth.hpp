#pragma once

#include <array>
#include <cstdint>

#include "json.hpp"
#include "vegidx/classify.hpp"
#include "vegidx/indices.hpp"
#include "vegidx/raster.hpp"

namespace vegidx {

/// Pixel counts per target class. Not ratios: they must add up to
/// width * height.
struct ClassCounts {
    std::uint64_t non_vegetation = 0;
    std::uint64_t stress = 0;
    std::uint64_t moderate = 0;
    std::uint64_t dense = 0;
    std::uint64_t nodata = 0;

    std::uint64_t sum() const noexcept { return non_vegetation + stress + moderate + dense + nodata; }
};

/// Reflectances held fixed while the remaining band is solved for.
struct AnchorBands {
    double red = 0.2;
    double green = 0.2; // only used when green is not the solved band
    double blue = 0.1;
};

struct SceneSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    IndexKind kind;
    ThresholdSet thresholds;
    ClassCounts fractions;
    AnchorBands fixed_bands;

    void validate() const;
};

/// Index value at the middle of each bin: (-1, t0], (t0, t1], (t1, t2], (t2, 1].
std::array<double, 4> bin_midpoints(const ThresholdSet& t);

/// Band value that makes `kind` evaluate to `target` given the anchors:
/// NIR for NDVI/SAVI, green for VARI/MGRVI. Throws UninvertibleTarget.
double invert_index(const IndexKind& kind, double target, const AnchorBands& anchors);

/// Band grid (red, green, blue, and nir for NDVI/SAVI) whose classified
/// index reproduces spec.fractions exactly. Pixels are laid out in raster
/// order: nodata, non-vegetation, stress, moderate, dense.
RasterGrid generate_scene(const SceneSpec& spec);

SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json scene_spec_to_json(const SceneSpec& spec);

} // namespace vegidx
