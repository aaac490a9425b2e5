#include "vegidx/indices.hpp"

#include <cctype>

#include "vegidx/error.hpp"
#include "vegidx/parallel.hpp"

namespace vegidx {

std::string_view index_name(Index index) {
    switch (index) {
    case Index::Ndvi: return "ndvi";
    case Index::Savi: return "savi";
    case Index::Vari: return "vari";
    case Index::Mgrvi: return "mgrvi";
    }
    return "?";
}

std::string_view index_label(Index index) {
    switch (index) {
    case Index::Ndvi: return "NDVI";
    case Index::Savi: return "SAVI";
    case Index::Vari: return "VARI";
    case Index::Mgrvi: return "MGRVI";
    }
    return "?";
}

Index parse_index(std::string_view name) {
    std::string lower(name);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (Index i : kAllIndices)
        if (index_name(i) == lower) return i;
    throw Error(ErrorCode::InvalidConfig, "unknown index '" + std::string(name) + "'");
}

bool needs_nir(Index index) noexcept { return index == Index::Ndvi || index == Index::Savi; }

void IndexKind::validate() const {
    if (!std::isfinite(savi_l) || savi_l < 0.0)
        throw Error(ErrorCode::NegativeL, "SAVI L must be finite and >= 0");
}

namespace {

std::size_t require_band(const BandSet& bands, BandRole role, const RasterGrid& grid) {
    const auto idx = bands.get(role);
    if (!idx) throw Error(ErrorCode::MissingBand, std::string(role_name(role)) + " band is not bound");
    if (*idx >= grid.band_count())
        throw Error(ErrorCode::MissingBand, std::string(role_name(role)) + " band index out of range");
    return *idx;
}

nlohmann::json index_meta(const IndexKind& kind) {
    nlohmann::json meta = nlohmann::json::object();
    meta["index"] = index_name(kind.index);
    if (kind.index == Index::Savi) meta["savi_l"] = kind.savi_l;
    return meta;
}

// Applies `fn` to the listed input bands at every pixel. A pixel whose
// inputs include nodata, or for which fn returns nullopt, becomes NaN.
template <std::size_t N, typename Fn>
IndexRaster map_pixels(const RasterGrid& grid, const std::array<std::size_t, N>& band_idx, const IndexKind& kind,
                       unsigned workers, Fn&& fn) {
    if (grid.dtype() != DType::Float32) throw Error(ErrorCode::UnsupportedDtype, "index inputs must be float32");
    std::array<std::span<const float>, N> in;
    for (std::size_t k = 0; k < N; ++k) in[k] = grid.band_f32(band_idx[k]);

    const std::size_t w = grid.width();
    std::vector<float> out(grid.pixel_count());
    for_row_blocks(grid.height(), workers, [&](std::size_t, std::size_t r0, std::size_t r1) {
        std::array<double, N> px{};
        for (std::size_t i = r0 * w; i < r1 * w; ++i) {
            bool valid = true;
            for (std::size_t k = 0; k < N; ++k) {
                const float s = in[k][i];
                if (grid.is_nodata(s)) {
                    valid = false;
                    break;
                }
                px[k] = static_cast<double>(s);
            }
            std::optional<double> v;
            if (valid) v = fn(px);
            out[i] = v ? static_cast<float>(*v) : std::nanf("");
        }
    });
    return IndexRaster{RasterGrid(grid.width(), grid.height(), {std::string(index_name(kind.index))},
                                  std::move(out), std::nan(""), index_meta(kind)),
                       kind};
}

} // namespace

IndexRaster compute_ndvi(const RasterGrid& grid, const BandSet& bands, unsigned workers) {
    bands.validate(grid);
    const std::array<std::size_t, 2> idx{require_band(bands, BandRole::Nir, grid),
                                         require_band(bands, BandRole::Red, grid)};
    return map_pixels(grid, idx, IndexKind{Index::Ndvi}, workers,
                      [](const std::array<double, 2>& p) { return kernel::ndvi(p[0], p[1]); });
}

IndexRaster compute_savi(const RasterGrid& grid, const BandSet& bands, double l, unsigned workers) {
    const IndexKind kind{Index::Savi, l};
    kind.validate();
    bands.validate(grid);
    const std::array<std::size_t, 2> idx{require_band(bands, BandRole::Nir, grid),
                                         require_band(bands, BandRole::Red, grid)};
    return map_pixels(grid, idx, kind, workers,
                      [l](const std::array<double, 2>& p) { return kernel::savi(p[0], p[1], l); });
}

IndexRaster compute_vari(const RasterGrid& grid, const BandSet& bands, unsigned workers) {
    bands.validate(grid);
    const std::array<std::size_t, 3> idx{require_band(bands, BandRole::Green, grid),
                                         require_band(bands, BandRole::Red, grid),
                                         require_band(bands, BandRole::Blue, grid)};
    return map_pixels(grid, idx, IndexKind{Index::Vari}, workers,
                      [](const std::array<double, 3>& p) { return kernel::vari(p[0], p[1], p[2]); });
}

IndexRaster compute_mgrvi(const RasterGrid& grid, const BandSet& bands, unsigned workers) {
    bands.validate(grid);
    const std::array<std::size_t, 2> idx{require_band(bands, BandRole::Green, grid),
                                         require_band(bands, BandRole::Red, grid)};
    return map_pixels(grid, idx, IndexKind{Index::Mgrvi}, workers,
                      [](const std::array<double, 2>& p) { return kernel::mgrvi(p[0], p[1]); });
}

IndexRaster compute_index(const RasterGrid& grid, const BandSet& bands, const IndexKind& kind, unsigned workers) {
    switch (kind.index) {
    case Index::Ndvi: return compute_ndvi(grid, bands, workers);
    case Index::Savi: return compute_savi(grid, bands, kind.savi_l, workers);
    case Index::Vari: return compute_vari(grid, bands, workers);
    case Index::Mgrvi: return compute_mgrvi(grid, bands, workers);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown index");
}

IndexRaster index_raster_from_grid(RasterGrid grid) {
    if (grid.dtype() != DType::Float32 || grid.band_count() != 1)
        throw Error(ErrorCode::InvalidGrid, "an index raster is a single float32 band");
    const auto& meta = grid.meta();
    if (!meta.contains("index") || !meta["index"].is_string())
        throw Error(ErrorCode::InvalidGrid, "index raster meta lacks \"index\"");
    IndexKind kind{parse_index(meta["index"].get<std::string>())};
    if (meta.contains("savi_l") && meta["savi_l"].is_number()) kind.savi_l = meta["savi_l"].get<double>();
    for (float v : grid.f32())
        if (!grid.is_nodata(v) && (v < -1.0f || v > 1.0f))
            throw Error(ErrorCode::ValueOutOfRange, "index raster value outside [-1, 1]");
    return IndexRaster{std::move(grid), kind};
}

} // namespace vegidx
