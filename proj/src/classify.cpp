#include "vegidx/classify.hpp"

#include <fstream>
#include <sstream>

#include "vegidx/error.hpp"
#include "vegidx/parallel.hpp"

namespace vegidx {

std::string_view class_key(HealthClass c) {
    switch (c) {
    case HealthClass::Nodata: return "nodata";
    case HealthClass::NonVegetation: return "non_vegetation";
    case HealthClass::Stress: return "stress";
    case HealthClass::Moderate: return "moderate";
    case HealthClass::Dense: return "dense";
    }
    return "?";
}

std::string_view class_label(HealthClass c) {
    switch (c) {
    case HealthClass::Nodata: return "nodata";
    case HealthClass::NonVegetation: return "non-vegetation";
    case HealthClass::Stress: return "stress";
    case HealthClass::Moderate: return "moderate";
    case HealthClass::Dense: return "dense";
    }
    return "?";
}

void ThresholdSet::validate() const {
    const bool finite = std::isfinite(t0) && std::isfinite(t1) && std::isfinite(t2);
    const auto f0 = static_cast<float>(t0), f1 = static_cast<float>(t1), f2 = static_cast<float>(t2);
    if (!finite || !(-1.0 <= t0 && t0 < t1 && t1 < t2 && t2 <= 1.0) || !(f0 < f1 && f1 < f2)) {
        std::ostringstream msg;
        msg << "need -1 <= t0 < t1 < t2 <= 1, got (" << t0 << ", " << t1 << ", " << t2 << ")";
        throw Error(ErrorCode::InvalidThresholds, msg.str());
    }
}

ThresholdSet ThresholdSet::defaults_for(Index index) {
    switch (index) {
    case Index::Ndvi: return {0.1, 0.3, 0.6};
    case Index::Savi: return {0.16, 0.33, 0.64};
    case Index::Vari: return {0.08, 0.22, 0.59};
    case Index::Mgrvi: return {0.08, 0.2, 0.59};
    }
    return {};
}

namespace {

nlohmann::json class_meta(const IndexKind& kind, const ThresholdSet& t) {
    nlohmann::json meta = nlohmann::json::object();
    meta["index"] = index_name(kind.index);
    if (kind.index == Index::Savi) meta["savi_l"] = kind.savi_l;
    meta["thresholds"] = {{"t0", t.t0}, {"t1", t.t1}, {"t2", t.t2}};
    return meta;
}

ThresholdSet thresholds_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "thresholds must be a JSON object");
    ThresholdSet t;
    for (auto [key, slot] : {std::pair{"t0", &t.t0}, std::pair{"t1", &t.t1}, std::pair{"t2", &t.t2}}) {
        if (!j.contains(key) || !j[key].is_number())
            throw Error(ErrorCode::ParseError, std::string("thresholds need a numeric \"") + key + "\"");
        *slot = j[key].get<double>();
    }
    t.validate();
    return t;
}

} // namespace

ClassRaster classify(const IndexRaster& index, const ThresholdSet& thresholds, unsigned workers) {
    thresholds.validate();
    const RasterGrid& src = index.grid;
    if (src.dtype() != DType::Float32 || src.band_count() != 1)
        throw Error(ErrorCode::InvalidGrid, "an index raster is a single float32 band");
    const auto values = src.band_f32(0);
    const auto t0 = static_cast<float>(thresholds.t0);
    const auto t1 = static_cast<float>(thresholds.t1);
    const auto t2 = static_cast<float>(thresholds.t2);

    std::vector<std::uint8_t> codes(src.pixel_count());
    const std::size_t w = src.width();
    for_row_blocks(src.height(), workers, [&](std::size_t, std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0 * w; i < r1 * w; ++i) {
            const float v = values[i];
            if (src.is_nodata(v)) {
                codes[i] = static_cast<std::uint8_t>(HealthClass::Nodata);
                continue;
            }
            if (v < -1.0f || v > 1.0f)
                throw Error(ErrorCode::ValueOutOfRange, "index value outside [-1, 1]");
            codes[i] = static_cast<std::uint8_t>(classify_value(v, t0, t1, t2));
        }
    });
    return ClassRaster{RasterGrid(src.width(), src.height(), {"class"}, std::move(codes), 0,
                                  class_meta(index.kind, thresholds)),
                       thresholds, index.kind};
}

ThresholdSet parse_thresholds(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return thresholds_from_json(j);
}

ThresholdSet load_thresholds(const std::optional<std::filesystem::path>& path, const IndexKind& kind) {
    if (!path) return ThresholdSet::defaults_for(kind.index);
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_thresholds(ss.str());
}

ClassRaster class_raster_from_grid(RasterGrid grid) {
    if (grid.dtype() != DType::UInt8 || grid.band_count() != 1)
        throw Error(ErrorCode::InvalidGrid, "a class raster is a single uint8 band");
    if (grid.nodata() != 0.0) throw Error(ErrorCode::InvalidGrid, "class raster nodata must be 0");
    const auto& meta = grid.meta();
    if (!meta.contains("index") || !meta["index"].is_string() || !meta.contains("thresholds"))
        throw Error(ErrorCode::InvalidGrid, "class raster meta lacks \"index\" or \"thresholds\"");
    IndexKind kind{parse_index(meta["index"].get<std::string>())};
    if (meta.contains("savi_l") && meta["savi_l"].is_number()) kind.savi_l = meta["savi_l"].get<double>();
    const ThresholdSet t = thresholds_from_json(meta["thresholds"]);
    for (std::uint8_t c : grid.u8())
        if (c >= kClassCount) throw Error(ErrorCode::ValueOutOfRange, "class code " + std::to_string(c));
    return ClassRaster{std::move(grid), t, kind};
}

} // namespace vegidx
