#include "vegidx/raster.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <set>

#include "vegidx/error.hpp"

namespace vegidx {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericToken: return "NonNumericToken";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::MissingBand: return "MissingBand";
    case ErrorCode::NegativeL: return "NegativeL";
    case ErrorCode::InvalidBandSet: return "InvalidBandSet";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::AllNodata: return "AllNodata";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::EmptyStats: return "EmptyStats";
    case ErrorCode::UninvertibleTarget: return "UninvertibleTarget";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

FailureClass failure_class(ErrorCode code) {
    switch (code) {
    case ErrorCode::IoFailure:
        return FailureClass::Io;
    case ErrorCode::NonPositiveScale:
    case ErrorCode::MissingBand:
    case ErrorCode::NegativeL:
    case ErrorCode::InvalidBandSet:
    case ErrorCode::InvalidThresholds:
    case ErrorCode::ParseError:
    case ErrorCode::EmptyStats:
    case ErrorCode::UninvertibleTarget:
    case ErrorCode::CountMismatch:
    case ErrorCode::InvalidConfig:
        return FailureClass::Config;
    default:
        return FailureClass::Data;
    }
}

std::string_view dtype_name(DType dtype) {
    return dtype == DType::Float32 ? "float32" : "uint8";
}

RasterGrid::RasterGrid(std::size_t width, std::size_t height, std::vector<std::string> bands,
                       std::vector<float> data, double nodata, nlohmann::json meta)
    : width_(width), height_(height), bands_(std::move(bands)), dtype_(DType::Float32),
      nodata_(nodata), meta_(std::move(meta)), data_(std::move(data)) {
    validate();
}

RasterGrid::RasterGrid(std::size_t width, std::size_t height, std::vector<std::string> bands,
                       std::vector<std::uint8_t> data, std::uint8_t nodata, nlohmann::json meta)
    : width_(width), height_(height), bands_(std::move(bands)), dtype_(DType::UInt8),
      nodata_(nodata), meta_(std::move(meta)), data_(std::move(data)) {
    validate();
}

RasterGrid RasterGrid::filled_nodata(std::size_t width, std::size_t height,
                                     std::vector<std::string> bands, DType dtype) {
    const std::size_t n = width * height * bands.size();
    if (dtype == DType::Float32)
        return RasterGrid(width, height, std::move(bands), std::vector<float>(n, std::nanf("")));
    return RasterGrid(width, height, std::move(bands), std::vector<std::uint8_t>(n, 0));
}

void RasterGrid::validate() const {
    if (width_ == 0 || height_ == 0)
        throw Error(ErrorCode::InvalidGrid, "width and height must be at least 1");
    if (bands_.empty()) throw Error(ErrorCode::InvalidGrid, "a grid needs at least one band");
    std::set<std::string_view> seen;
    for (const auto& name : bands_)
        if (!seen.insert(name).second)
            throw Error(ErrorCode::InvalidGrid, "duplicate band name '" + name + "'");
    if (!meta_.is_object()) throw Error(ErrorCode::InvalidGrid, "meta must be a JSON object");

    const std::size_t expected = width_ * height_ * bands_.size();
    if (dtype_ == DType::Float32) {
        const auto& v = std::get<std::vector<float>>(data_);
        if (v.size() != expected)
            throw Error(ErrorCode::InvalidGrid, "sample count " + std::to_string(v.size()) +
                                                    " != width*height*bands " + std::to_string(expected));
        if (std::isinf(nodata_)) throw Error(ErrorCode::InvalidGrid, "nodata must be NaN or finite");
        for (float s : v)
            if (!is_nodata(s) && !std::isfinite(s))
                throw Error(ErrorCode::InvalidGrid, "non-finite sample that is not nodata");
    } else {
        const auto& v = std::get<std::vector<std::uint8_t>>(data_);
        if (v.size() != expected)
            throw Error(ErrorCode::InvalidGrid, "sample count " + std::to_string(v.size()) +
                                                    " != width*height*bands " + std::to_string(expected));
        if (!(nodata_ >= 0 && nodata_ <= 255 && nodata_ == std::floor(nodata_)))
            throw Error(ErrorCode::InvalidGrid, "uint8 nodata must be an integer in [0, 255]");
    }
}

void RasterGrid::set_meta(nlohmann::json meta) {
    if (!meta.is_object()) throw Error(ErrorCode::InvalidGrid, "meta must be a JSON object");
    meta_ = std::move(meta);
}

std::optional<std::size_t> RasterGrid::find_band(std::string_view name) const {
    for (std::size_t i = 0; i < bands_.size(); ++i)
        if (bands_[i] == name) return i;
    return std::nullopt;
}

const std::vector<float>& RasterGrid::f32() const {
    if (dtype_ != DType::Float32) throw Error(ErrorCode::UnsupportedDtype, "grid is not float32");
    return std::get<std::vector<float>>(data_);
}

const std::vector<std::uint8_t>& RasterGrid::u8() const {
    if (dtype_ != DType::UInt8) throw Error(ErrorCode::UnsupportedDtype, "grid is not uint8");
    return std::get<std::vector<std::uint8_t>>(data_);
}

std::span<const float> RasterGrid::band_f32(std::size_t band) const {
    if (band >= bands_.size()) throw Error(ErrorCode::MissingBand, "band index out of range");
    return std::span<const float>(f32()).subspan(band * pixel_count(), pixel_count());
}

std::span<float> RasterGrid::band_f32(std::size_t band) {
    if (band >= bands_.size()) throw Error(ErrorCode::MissingBand, "band index out of range");
    if (dtype_ != DType::Float32) throw Error(ErrorCode::UnsupportedDtype, "grid is not float32");
    return std::span<float>(std::get<std::vector<float>>(data_)).subspan(band * pixel_count(), pixel_count());
}

std::span<const std::uint8_t> RasterGrid::band_u8(std::size_t band) const {
    if (band >= bands_.size()) throw Error(ErrorCode::MissingBand, "band index out of range");
    return std::span<const std::uint8_t>(u8()).subspan(band * pixel_count(), pixel_count());
}

std::span<std::uint8_t> RasterGrid::band_u8(std::size_t band) {
    if (band >= bands_.size()) throw Error(ErrorCode::MissingBand, "band index out of range");
    if (dtype_ != DType::UInt8) throw Error(ErrorCode::UnsupportedDtype, "grid is not uint8");
    return std::span<std::uint8_t>(std::get<std::vector<std::uint8_t>>(data_))
        .subspan(band * pixel_count(), pixel_count());
}

std::size_t RasterGrid::payload_bytes() const noexcept {
    return pixel_count() * band_count() * (dtype_ == DType::Float32 ? 4 : 1);
}

bool operator==(const RasterGrid& a, const RasterGrid& b) {
    if (a.width_ != b.width_ || a.height_ != b.height_ || a.bands_ != b.bands_ || a.dtype_ != b.dtype_ ||
        a.meta_ != b.meta_)
        return false;
    if (std::bit_cast<std::uint64_t>(a.nodata_) != std::bit_cast<std::uint64_t>(b.nodata_) &&
        !(std::isnan(a.nodata_) && std::isnan(b.nodata_)))
        return false;
    if (a.dtype_ == DType::UInt8) return a.u8() == b.u8();
    const auto& x = a.f32();
    const auto& y = b.f32();
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(float)) == 0;
}

void check_coregistered(const RasterGrid& a, const RasterGrid& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                        std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

std::string_view role_name(BandRole role) {
    switch (role) {
    case BandRole::Red: return "red";
    case BandRole::Green: return "green";
    case BandRole::Blue: return "blue";
    case BandRole::Nir: return "nir";
    }
    return "?";
}

std::optional<std::size_t> BandSet::get(BandRole role) const {
    switch (role) {
    case BandRole::Red: return red;
    case BandRole::Green: return green;
    case BandRole::Blue: return blue;
    case BandRole::Nir: return nir;
    }
    return std::nullopt;
}

void BandSet::validate(const RasterGrid& grid) const {
    std::set<std::size_t> used;
    for (BandRole role : {BandRole::Red, BandRole::Green, BandRole::Blue, BandRole::Nir}) {
        const auto idx = get(role);
        if (!idx) continue;
        if (*idx >= grid.band_count())
            throw Error(ErrorCode::InvalidBandSet, std::string(role_name(role)) + " band index " +
                                                       std::to_string(*idx) + " out of range");
        if (!used.insert(*idx).second)
            throw Error(ErrorCode::InvalidBandSet,
                        "band " + std::to_string(*idx) + " bound to more than one role");
    }
}

BandSet BandSet::from_names(const RasterGrid& grid) {
    auto lookup = [&](std::string_view role) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < grid.band_count(); ++i) {
            const auto& name = grid.band_names()[i];
            if (name.size() == role.size() &&
                std::equal(name.begin(), name.end(), role.begin(),
                           [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; }))
                return i;
        }
        return std::nullopt;
    };
    return BandSet{lookup("red"), lookup("green"), lookup("blue"), lookup("nir")};
}

} // namespace vegidx
