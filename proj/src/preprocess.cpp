#include "vegidx/preprocess.hpp"

#include <algorithm>
#include <array>

#include "vegidx/error.hpp"
#include "vegidx/parallel.hpp"

namespace vegidx {

RasterGrid radiometric_scale(const RasterGrid& grid, const PreprocessSpec& spec, unsigned workers) {
    if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
        throw Error(ErrorCode::NonPositiveScale, "scale must be finite and > 0");
    std::vector<float> out = grid.f32();
    const std::size_t w = grid.width();
    for (std::size_t band = 0; band < grid.band_count(); ++band) {
        float* base = out.data() + band * grid.pixel_count();
        for_row_blocks(grid.height(), workers, [&](std::size_t, std::size_t r0, std::size_t r1) {
            for (std::size_t i = r0 * w; i < r1 * w; ++i) {
                if (grid.is_nodata(base[i])) continue;
                double v = static_cast<double>(base[i]) * spec.scale;
                if (spec.clamp_to_unit) v = std::clamp(v, 0.0, 1.0);
                base[i] = static_cast<float>(v);
            }
        });
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!grid.is_nodata(grid.f32()[i]) && !std::isfinite(out[i]))
            throw Error(ErrorCode::NonPositiveScale, "scaling overflows float32");
    return RasterGrid(grid.width(), grid.height(), grid.band_names(), std::move(out), grid.nodata(),
                      grid.meta());
}

RasterGrid median_filter_3x3(const RasterGrid& grid, unsigned workers) {
    const auto& in = grid.f32();
    std::vector<float> out(in.size());
    const std::size_t w = grid.width();
    const std::size_t h = grid.height();
    for (std::size_t band = 0; band < grid.band_count(); ++band) {
        const float* src = in.data() + band * grid.pixel_count();
        float* dst = out.data() + band * grid.pixel_count();
        for_row_blocks(h, workers, [&](std::size_t, std::size_t r0, std::size_t r1) {
            std::array<float, 9> hood{};
            for (std::size_t y = r0; y < r1; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    const float centre = src[y * w + x];
                    if (grid.is_nodata(centre)) {
                        dst[y * w + x] = centre;
                        continue;
                    }
                    std::size_t n = 0;
                    for (int dy = -1; dy <= 1; ++dy) {
                        const std::size_t yy = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(y) + dy, 0,
                                                                          static_cast<std::ptrdiff_t>(h) - 1);
                        for (int dx = -1; dx <= 1; ++dx) {
                            const std::size_t xx = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(x) + dx,
                                                                              0, static_cast<std::ptrdiff_t>(w) - 1);
                            const float v = src[yy * w + xx];
                            if (!grid.is_nodata(v)) hood[n++] = v;
                        }
                    }
                    const std::size_t mid = (n - 1) / 2;
                    std::nth_element(hood.begin(), hood.begin() + static_cast<std::ptrdiff_t>(mid),
                                     hood.begin() + static_cast<std::ptrdiff_t>(n));
                    dst[y * w + x] = hood[mid];
                }
            }
        });
    }
    return RasterGrid(grid.width(), grid.height(), grid.band_names(), std::move(out), grid.nodata(),
                      grid.meta());
}

RasterGrid apply_preprocess(const RasterGrid& grid, const PreprocessSpec& spec, unsigned workers) {
    RasterGrid out = radiometric_scale(grid, spec, workers);
    if (spec.median3) out = median_filter_3x3(out, workers);
    return out;
}

} // namespace vegidx
