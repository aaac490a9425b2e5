#pragma once

#include "vegidx/raster.hpp"

namespace vegidx {

struct PreprocessSpec {
    double scale = 1.0;
    bool clamp_to_unit = false;
    bool median3 = false;

    bool is_identity() const noexcept { return scale == 1.0 && !clamp_to_unit && !median3; }
};

/// Multiplies every valid sample by spec.scale, optionally clamping into
/// [0, 1]. Nodata samples pass through untouched.
RasterGrid radiometric_scale(const RasterGrid& grid, const PreprocessSpec& spec, unsigned workers = 1);

/// 3x3 median per band with edge replication. Nodata neighbours are
/// dropped; an even-sized neighbourhood takes the lower-middle element.
RasterGrid median_filter_3x3(const RasterGrid& grid, unsigned workers = 1);

/// Scale (and clamp), then median filter when requested.
RasterGrid apply_preprocess(const RasterGrid& grid, const PreprocessSpec& spec, unsigned workers = 1);

} // namespace vegidx
