#include "vegidx/vgr_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "vegidx/error.hpp"

namespace vegidx {
namespace {

constexpr char kMagic[4] = {'V', 'G', 'R', 'R'};

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

nlohmann::json header_of(const RasterGrid& grid) {
    nlohmann::json h = nlohmann::json::object();
    h["width"] = grid.width();
    h["height"] = grid.height();
    h["dtype"] = dtype_name(grid.dtype());
    if (std::isnan(grid.nodata()))
        h["nodata"] = "nan";
    else if (grid.dtype() == DType::UInt8)
        h["nodata"] = static_cast<int>(grid.nodata());
    else
        h["nodata"] = grid.nodata();
    h["bands"] = grid.band_names();
    h["meta"] = grid.meta();
    return h;
}

template <typename T>
T require(const nlohmann::json& h, const char* key) {
    if (!h.contains(key)) throw Error(ErrorCode::HeaderMismatch, std::string("header lacks '") + key + "'");
    try {
        return h.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::HeaderMismatch, std::string("header key '") + key + "' has the wrong type");
    }
}

} // namespace

std::vector<std::uint8_t> encode_vgr(const RasterGrid& grid) {
    const std::string header = header_of(grid).dump();
    std::vector<std::uint8_t> out;
    out.reserve(8 + header.size() + grid.payload_bytes());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32le(out, static_cast<std::uint32_t>(header.size()));
    out.insert(out.end(), header.begin(), header.end());

    if (grid.dtype() == DType::UInt8) {
        const auto& v = grid.u8();
        out.insert(out.end(), v.begin(), v.end());
        return out;
    }
    const auto& v = grid.f32();
    const std::size_t at = out.size();
    out.resize(at + v.size() * 4);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out.data() + at, v.data(), v.size() * 4);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto bits = std::bit_cast<std::uint32_t>(v[i]);
            for (int k = 0; k < 4; ++k) out[at + 4 * i + k] = static_cast<std::uint8_t>(bits >> (8 * k));
        }
    }
    return out;
}

RasterGrid decode_vgr(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw Error(ErrorCode::BadMagic, "missing VGRR magic");
    if (bytes.size() < 8) throw Error(ErrorCode::HeaderMismatch, "truncated header length");
    const std::size_t header_len = get_u32le(bytes.data() + 4);
    if (bytes.size() < 8 + header_len) throw Error(ErrorCode::HeaderMismatch, "truncated header");

    nlohmann::json h;
    try {
        h = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(header_len));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::HeaderMismatch, std::string("header is not JSON: ") + e.what());
    }
    if (!h.is_object()) throw Error(ErrorCode::HeaderMismatch, "header is not a JSON object");

    const auto width = require<std::size_t>(h, "width");
    const auto height = require<std::size_t>(h, "height");
    const auto dtype = require<std::string>(h, "dtype");
    const auto bands = require<std::vector<std::string>>(h, "bands");
    const auto meta = require<nlohmann::json>(h, "meta");
    if (!h.contains("nodata")) throw Error(ErrorCode::HeaderMismatch, "header lacks 'nodata'");
    const auto& nd = h.at("nodata");
    double nodata = 0.0;
    if (nd.is_string()) {
        std::string s = nd.get<std::string>();
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (s != "nan") throw Error(ErrorCode::HeaderMismatch, "nodata string must be \"nan\"");
        nodata = std::nan("");
    } else if (nd.is_number()) {
        nodata = nd.get<double>();
    } else {
        throw Error(ErrorCode::HeaderMismatch, "nodata must be a number or \"nan\"");
    }

    std::size_t sample_size = 0;
    if (dtype == "float32")
        sample_size = 4;
    else if (dtype == "uint8")
        sample_size = 1;
    else
        throw Error(ErrorCode::UnsupportedDtype, "dtype '" + dtype + "'");

    const std::size_t samples = width * height * bands.size();
    const std::size_t payload = bytes.size() - 8 - header_len;
    if (payload != samples * sample_size)
        throw Error(ErrorCode::HeaderMismatch, "header declares " + std::to_string(samples) +
                                                   " samples but payload holds " + std::to_string(payload) +
                                                   " bytes");

    const std::uint8_t* p = bytes.data() + 8 + header_len;
    if (sample_size == 1) {
        if (std::isnan(nodata)) throw Error(ErrorCode::HeaderMismatch, "uint8 grids cannot use NaN nodata");
        return RasterGrid(width, height, bands, std::vector<std::uint8_t>(p, p + samples),
                          static_cast<std::uint8_t>(nodata), meta);
    }
    std::vector<float> data(samples);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(data.data(), p, samples * 4);
    } else {
        for (std::size_t i = 0; i < samples; ++i) data[i] = std::bit_cast<float>(get_u32le(p + 4 * i));
    }
    return RasterGrid(width, height, bands, std::move(data), nodata, meta);
}

RasterGrid read_vgr(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    return decode_vgr(bytes);
}

void write_vgr(const RasterGrid& grid, const std::filesystem::path& path) {
    const auto bytes = encode_vgr(grid);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

} // namespace vegidx
