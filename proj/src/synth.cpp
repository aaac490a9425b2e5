#include "vegidx/synth.hpp"

#include <cmath>

#include "vegidx/error.hpp"

namespace vegidx {

std::array<double, 4> bin_midpoints(const ThresholdSet& t) {
    return {(-1.0 + t.t0) / 2.0, (t.t0 + t.t1) / 2.0, (t.t1 + t.t2) / 2.0, (t.t2 + 1.0) / 2.0};
}

double invert_index(const IndexKind& kind, double target, const AnchorBands& a) {
    if (!(target > -1.0 && target < 1.0))
        throw Error(ErrorCode::UninvertibleTarget, "target must lie strictly inside (-1, 1)");
    double band = 0.0;
    switch (kind.index) {
    case Index::Ndvi:
        band = a.red * (1.0 + target) / (1.0 - target);
        break;
    case Index::Savi: {
        const double l = kind.savi_l;
        const double den = 1.0 + l - target;
        if (den == 0.0) throw Error(ErrorCode::UninvertibleTarget, "SAVI target equals 1 + L");
        band = (a.red * (1.0 + l) + target * (a.red + l)) / den;
        break;
    }
    case Index::Vari:
        band = (a.red + target * (a.red - a.blue)) / (1.0 - target);
        break;
    case Index::Mgrvi:
        band = a.red * std::sqrt((1.0 + target) / (1.0 - target));
        break;
    }
    if (!std::isfinite(band) || band < 0.0 || !std::isfinite(static_cast<float>(band)))
        throw Error(ErrorCode::UninvertibleTarget,
                    "target " + std::to_string(target) + " needs band value " + std::to_string(band));
    return band;
}

namespace {

struct PixelBands {
    float red, green, blue, nir;
};

PixelBands solve_pixel(const SceneSpec& spec, double target) {
    const auto& a = spec.fixed_bands;
    const float solved = static_cast<float>(invert_index(spec.kind, target, a));
    PixelBands p{static_cast<float>(a.red), static_cast<float>(a.green), static_cast<float>(a.blue), 0.0f};
    if (needs_nir(spec.kind.index))
        p.nir = solved;
    else
        p.green = solved;
    return p;
}

// Forward evaluation on the float32 bands actually written.
std::optional<double> forward(const IndexKind& kind, const PixelBands& p) {
    switch (kind.index) {
    case Index::Ndvi: return kernel::ndvi(p.nir, p.red);
    case Index::Savi: return kernel::savi(p.nir, p.red, kind.savi_l);
    case Index::Vari: return kernel::vari(p.green, p.red, p.blue);
    case Index::Mgrvi: return kernel::mgrvi(p.green, p.red);
    }
    return std::nullopt;
}

} // namespace

void SceneSpec::validate() const {
    if (width == 0 || height == 0) throw Error(ErrorCode::InvalidConfig, "scene needs width and height >= 1");
    kind.validate();
    thresholds.validate();
    if (fractions.sum() != width * height)
        throw Error(ErrorCode::CountMismatch, "class counts add up to " + std::to_string(fractions.sum()) +
                                                  ", scene has " + std::to_string(width * height) + " pixels");
    for (double v : {fixed_bands.red, fixed_bands.green, fixed_bands.blue})
        if (!std::isfinite(v) || v <= 0.0) throw Error(ErrorCode::UninvertibleTarget, "anchor bands must be > 0");

    const auto mids = bin_midpoints(thresholds);
    const auto t0 = static_cast<float>(thresholds.t0);
    const auto t1 = static_cast<float>(thresholds.t1);
    const auto t2 = static_cast<float>(thresholds.t2);
    for (std::size_t bin = 0; bin < mids.size(); ++bin) {
        const PixelBands p = solve_pixel(*this, mids[bin]);
        const auto v = forward(kind, p);
        if (!v ||
            classify_value(static_cast<float>(*v), t0, t1, t2) != static_cast<HealthClass>(bin + 1))
            throw Error(ErrorCode::UninvertibleTarget,
                        "midpoint of bin " + std::to_string(bin + 1) + " does not survive float32 rounding");
    }
}

RasterGrid generate_scene(const SceneSpec& spec) {
    spec.validate();
    const auto mids = bin_midpoints(spec.thresholds);
    std::array<PixelBands, 4> per_class{};
    for (std::size_t bin = 0; bin < 4; ++bin) per_class[bin] = solve_pixel(spec, mids[bin]);

    const bool with_nir = needs_nir(spec.kind.index);
    std::vector<std::string> names{"red", "green", "blue"};
    if (with_nir) names.emplace_back("nir");
    const std::size_t n = spec.width * spec.height;
    std::vector<float> data(n * names.size());
    float* red = data.data();
    float* green = red + n;
    float* blue = green + n;
    float* nir = with_nir ? blue + n : nullptr;

    const std::array<std::uint64_t, 5> runs{spec.fractions.nodata, spec.fractions.non_vegetation,
                                            spec.fractions.stress, spec.fractions.moderate, spec.fractions.dense};
    std::size_t i = 0;
    for (std::size_t run = 0; run < runs.size(); ++run) {
        for (std::uint64_t k = 0; k < runs[run]; ++k, ++i) {
            if (run == 0) {
                const float nan = std::nanf("");
                red[i] = green[i] = blue[i] = nan;
                if (nir) nir[i] = nan;
                continue;
            }
            const PixelBands& p = per_class[run - 1];
            red[i] = p.red;
            green[i] = p.green;
            blue[i] = p.blue;
            if (nir) nir[i] = p.nir;
        }
    }
    return RasterGrid(spec.width, spec.height, std::move(names), std::move(data));
}

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
    try {
        SceneSpec s;
        s.width = j.at("width").get<std::size_t>();
        s.height = j.at("height").get<std::size_t>();
        const auto& kind = j.at("kind");
        if (kind.is_string()) {
            s.kind.index = parse_index(kind.get<std::string>());
            s.kind.savi_l = j.value("savi_l", 0.5);
        } else {
            s.kind.index = parse_index(kind.at("kind").get<std::string>());
            s.kind.savi_l = kind.value("savi_l", 0.5);
        }
        s.thresholds = ThresholdSet::defaults_for(s.kind.index);
        if (j.contains("thresholds")) {
            const auto& t = j.at("thresholds");
            s.thresholds = {t.at("t0").get<double>(), t.at("t1").get<double>(), t.at("t2").get<double>()};
        }
        const auto& f = j.at("fractions");
        s.fractions.non_vegetation = f.value("non_vegetation", std::uint64_t{0});
        s.fractions.stress = f.value("stress", std::uint64_t{0});
        s.fractions.moderate = f.value("moderate", std::uint64_t{0});
        s.fractions.dense = f.value("dense", std::uint64_t{0});
        s.fractions.nodata = f.value("nodata", std::uint64_t{0});
        if (j.contains("fixed_bands")) {
            const auto& b = j.at("fixed_bands");
            s.fixed_bands.red = b.value("red", s.fixed_bands.red);
            s.fixed_bands.green = b.value("green", s.fixed_bands.green);
            s.fixed_bands.blue = b.value("blue", s.fixed_bands.blue);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed scene spec: ") + e.what());
    }
}

nlohmann::ordered_json scene_spec_to_json(const SceneSpec& s) {
    nlohmann::ordered_json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["kind"] = {{"kind", index_name(s.kind.index)}, {"savi_l", s.kind.savi_l}};
    j["thresholds"] = {{"t0", s.thresholds.t0}, {"t1", s.thresholds.t1}, {"t2", s.thresholds.t2}};
    j["fractions"] = {{"non_vegetation", s.fractions.non_vegetation},
                      {"stress", s.fractions.stress},
                      {"moderate", s.fractions.moderate},
                      {"dense", s.fractions.dense},
                      {"nodata", s.fractions.nodata}};
    j["fixed_bands"] = {{"red", s.fixed_bands.red}, {"green", s.fixed_bands.green}, {"blue", s.fixed_bands.blue}};
    return j;
}

} // namespace vegidx
