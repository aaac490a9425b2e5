#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vegidx/raster.hpp"

namespace vegidx {

// VGR layout: "VGRR", u32le header length, JSON header, band-sequential
// little-endian payload.

RasterGrid read_vgr(const std::filesystem::path& path);
void write_vgr(const RasterGrid& grid, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_vgr(const RasterGrid& grid);
RasterGrid decode_vgr(const std::vector<std::uint8_t>& bytes);

/// Single-band float32 grid from a rectangular comma-separated file.
/// "nan" in any case marks nodata.
RasterGrid read_csv_band(const std::filesystem::path& path);
RasterGrid parse_csv_band(const std::string& text);

} // namespace vegidx
