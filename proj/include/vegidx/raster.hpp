#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace vegidx {

enum class DType : std::uint8_t { Float32, UInt8 };

std::string_view dtype_name(DType dtype);

/// A width x height x bands grid of samples, band-sequential and row-major
/// within each band. Float grids use NaN as the default nodata sentinel,
/// byte grids use 0.
///
/// Construction validates the layout invariants; the grid is then treated
/// as an immutable value by every pipeline stage.
class RasterGrid {
public:
    RasterGrid(std::size_t width, std::size_t height, std::vector<std::string> bands,
               std::vector<float> data, double nodata = std::nan(""),
               nlohmann::json meta = nlohmann::json::object());
    RasterGrid(std::size_t width, std::size_t height, std::vector<std::string> bands,
               std::vector<std::uint8_t> data, std::uint8_t nodata = 0,
               nlohmann::json meta = nlohmann::json::object());

    /// Grid with every sample set to nodata.
    static RasterGrid filled_nodata(std::size_t width, std::size_t height,
                                    std::vector<std::string> bands, DType dtype);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    std::size_t band_count() const noexcept { return bands_.size(); }
    const std::vector<std::string>& band_names() const noexcept { return bands_; }
    DType dtype() const noexcept { return dtype_; }
    double nodata() const noexcept { return nodata_; }
    const nlohmann::json& meta() const noexcept { return meta_; }
    void set_meta(nlohmann::json meta);

    std::optional<std::size_t> find_band(std::string_view name) const;

    std::span<const float> band_f32(std::size_t band) const;
    std::span<float> band_f32(std::size_t band);
    std::span<const std::uint8_t> band_u8(std::size_t band) const;
    std::span<std::uint8_t> band_u8(std::size_t band);

    const std::vector<float>& f32() const;
    const std::vector<std::uint8_t>& u8() const;

    bool is_nodata(float v) const noexcept {
        return std::isnan(nodata_) ? std::isnan(v) : static_cast<double>(v) == nodata_;
    }
    bool is_nodata_u8(std::uint8_t v) const noexcept { return static_cast<double>(v) == nodata_; }

    /// Size of the sample payload in bytes.
    std::size_t payload_bytes() const noexcept;

    /// Bit-exact equality: header fields, meta, and payload bit patterns.
    friend bool operator==(const RasterGrid& a, const RasterGrid& b);

private:
    void validate() const;

    std::size_t width_;
    std::size_t height_;
    std::vector<std::string> bands_;
    DType dtype_;
    double nodata_;
    nlohmann::json meta_;
    std::variant<std::vector<float>, std::vector<std::uint8_t>> data_;
};

/// Throws DimensionMismatch unless both grids share width and height.
void check_coregistered(const RasterGrid& a, const RasterGrid& b);

enum class BandRole { Red, Green, Blue, Nir };

std::string_view role_name(BandRole role);

/// Role-to-band-index binding over one grid.
struct BandSet {
    std::optional<std::size_t> red;
    std::optional<std::size_t> green;
    std::optional<std::size_t> blue;
    std::optional<std::size_t> nir;

    std::optional<std::size_t> get(BandRole role) const;

    /// Indices in range and pairwise distinct, else InvalidBandSet.
    void validate(const RasterGrid& grid) const;

    /// Binds roles to bands named red/green/blue/nir (case-insensitive).
    /// Roles without a matching band stay unbound.
    static BandSet from_names(const RasterGrid& grid);
};

} // namespace vegidx
