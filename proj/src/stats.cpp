#include "vegidx/stats.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "vegidx/error.hpp"
#include "vegidx/parallel.hpp"
#include "vegidx/text_format.hpp"

namespace vegidx {

double ClassStats::pct_of_total(HealthClass c) const {
    if (total_valid == 0) return 0.0;
    return 100.0 * static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(total_valid);
}

double ClassStats::pct_of_vegetation(HealthClass c) const {
    const auto veg = veg_total();
    if (veg == 0 || c == HealthClass::NonVegetation || c == HealthClass::Nodata) return 0.0;
    return 100.0 * static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(veg);
}

std::array<double, 4> ClassStats::exported_pct_of_total() const {
    const auto units = percent_hundredths<4>({counts[1], counts[2], counts[3], counts[4]}, total_valid);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = static_cast<double>(units[i]) / 100.0;
    return out;
}

std::array<double, 3> ClassStats::exported_pct_of_vegetation() const {
    const auto units = percent_hundredths<3>({counts[2], counts[3], counts[4]}, veg_total());
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = static_cast<double>(units[i]) / 100.0;
    return out;
}

ClassStats compute_stats(const ClassRaster& classes, const IndexRaster& index, unsigned workers) {
    check_coregistered(classes.grid, index.grid);
    const auto codes = classes.grid.band_u8(0);
    const auto values = index.grid.band_f32(0);
    const std::size_t w = classes.grid.width();

    struct Partial {
        std::array<std::uint64_t, kClassCount> counts{};
        float lo = std::numeric_limits<float>::infinity();
        float hi = -std::numeric_limits<float>::infinity();
    };
    std::vector<Partial> partials(row_block_count(classes.grid.height(), workers));
    for_row_blocks(classes.grid.height(), workers, [&](std::size_t block, std::size_t r0, std::size_t r1) {
        Partial p;
        for (std::size_t i = r0 * w; i < r1 * w; ++i) {
            const std::uint8_t c = codes[i];
            if (c >= kClassCount) throw Error(ErrorCode::ValueOutOfRange, "class code " + std::to_string(c));
            ++p.counts[c];
            const float v = values[i];
            if (!index.grid.is_nodata(v)) {
                p.lo = std::min(p.lo, v);
                p.hi = std::max(p.hi, v);
            }
        }
        partials[block] = p;
    });

    ClassStats stats;
    stats.kind = classes.source_kind;
    stats.thresholds = classes.thresholds;
    float lo = std::numeric_limits<float>::infinity();
    float hi = -std::numeric_limits<float>::infinity();
    for (const auto& p : partials) {
        for (std::size_t c = 1; c < kClassCount; ++c) stats.counts[c] += p.counts[c];
        lo = std::min(lo, p.lo);
        hi = std::max(hi, p.hi);
    }
    stats.total_valid = stats.counts[1] + stats.counts[2] + stats.counts[3] + stats.counts[4];
    if (stats.total_valid == 0 || lo > hi) throw Error(ErrorCode::AllNodata, "no valid pixels");
    stats.index_min = static_cast<double>(lo);
    stats.index_max = static_cast<double>(hi);
    return stats;
}

nlohmann::ordered_json stats_to_json(const ClassStats& stats) {
    const auto pct = stats.exported_pct_of_total();
    const auto veg = stats.exported_pct_of_vegetation();
    nlohmann::ordered_json j;
    j["index"] = index_name(stats.kind.index);
    j["min"] = float32_as_decimal(static_cast<float>(stats.index_min));
    j["max"] = float32_as_decimal(static_cast<float>(stats.index_max));
    j["total_valid"] = stats.total_valid;
    nlohmann::ordered_json classes = nlohmann::ordered_json::object();
    for (std::size_t c = 1; c < kClassCount; ++c)
        classes[std::string(class_key(static_cast<HealthClass>(c)))] = {{"count", stats.counts[c]},
                                                                        {"pct", pct[c - 1]}};
    j["classes"] = classes;
    j["vegetation_subdivision"] = {{"stress_pct", veg[0]}, {"moderate_pct", veg[1]}, {"dense_pct", veg[2]}};
    return j;
}

ClassStats stats_from_json(const nlohmann::json& j) {
    try {
        ClassStats s;
        s.kind = IndexKind{parse_index(j.at("index").get<std::string>())};
        s.thresholds = ThresholdSet::defaults_for(s.kind.index);
        s.index_min = j.at("min").get<double>();
        s.index_max = j.at("max").get<double>();
        s.total_valid = j.at("total_valid").get<std::uint64_t>();
        const auto& classes = j.at("classes");
        for (std::size_t c = 1; c < kClassCount; ++c)
            s.counts[c] = classes.at(std::string(class_key(static_cast<HealthClass>(c))))
                              .at("count")
                              .get<std::uint64_t>();
        if (s.counts[1] + s.counts[2] + s.counts[3] + s.counts[4] != s.total_valid)
            throw Error(ErrorCode::ParseError, "class counts do not add up to total_valid");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed stats JSON: ") + e.what());
    }
}

std::string stats_to_csv(const ClassStats& stats) {
    const auto units = percent_hundredths<2>({stats.counts[1], stats.veg_total()}, stats.total_valid);
    const auto veg = stats.exported_pct_of_vegetation();
    const std::string label(index_label(stats.kind.index));
    const auto& t = stats.thresholds;
    auto pct = [](std::uint64_t hundredths) { return format_fixed(static_cast<double>(hundredths) / 100.0, 2); };

    std::ostringstream out;
    out << "index,minimum,maximum,non_vegetation_range,non_vegetation_pct,vegetation_range,vegetation_pct,"
           "stress_range,stress_pct,moderate_range,moderate_pct,dense_range,dense_pct\n";
    out << label << ',' << format_float32(static_cast<float>(stats.index_min)) << ','
        << format_float32(static_cast<float>(stats.index_max)) << ','
        << "-1 <= " << label << " <= " << format_shortest(t.t0) << ',' << pct(units[0]) << ','
        << format_shortest(t.t0) << " < " << label << " <= 1" << ',' << pct(units[1]) << ','
        << format_shortest(t.t0) << " < " << label << " <= " << format_shortest(t.t1) << ','
        << format_fixed(veg[0], 2) << ',' << format_shortest(t.t1) << " < " << label
        << " <= " << format_shortest(t.t2) << ',' << format_fixed(veg[1], 2) << ','
        << format_shortest(t.t2) << " < " << label << " <= 1" << ',' << format_fixed(veg[2], 2) << '\n';
    return out.str();
}

AgreementReport compare_class_grids(const RasterGrid& a, const RasterGrid& b, unsigned workers) {
    check_coregistered(a, b);
    const auto ca = a.band_u8(0);
    const auto cb = b.band_u8(0);
    const std::size_t w = a.width();
    using Matrix = std::array<std::array<std::uint64_t, 4>, 4>;
    std::vector<Matrix> partials(row_block_count(a.height(), workers));
    for_row_blocks(a.height(), workers, [&](std::size_t block, std::size_t r0, std::size_t r1) {
        Matrix m{};
        for (std::size_t i = r0 * w; i < r1 * w; ++i) {
            const std::uint8_t x = ca[i];
            const std::uint8_t y = cb[i];
            if (x >= kClassCount || y >= kClassCount)
                throw Error(ErrorCode::ValueOutOfRange, "class code outside 0..4");
            if (x == 0 || y == 0) continue;
            ++m[x - 1][y - 1];
        }
        partials[block] = m;
    });

    AgreementReport r;
    for (const auto& m : partials)
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t k = 0; k < 4; ++k) r.matrix[i][k] += m[i][k];

    std::array<std::uint64_t, 4> rows{}, cols{};
    std::uint64_t diag = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            rows[i] += r.matrix[i][k];
            cols[k] += r.matrix[i][k];
        }
        diag += r.matrix[i][i];
    }
    for (auto v : rows) r.total_compared += v;
    if (r.total_compared == 0) throw Error(ErrorCode::NoOverlap, "no pixel is valid in both rasters");

    const double n = static_cast<double>(r.total_compared);
    r.overall_agreement = static_cast<double>(diag) / n;
    double chance = 0.0;
    bool chance_is_one = false;
    for (std::size_t i = 0; i < 4; ++i) {
        chance += (static_cast<double>(rows[i]) / n) * (static_cast<double>(cols[i]) / n);
        if (rows[i] == r.total_compared && cols[i] == r.total_compared) chance_is_one = true;
    }
    // Both rasters hold a single identical class: agreement is perfect.
    r.kappa = chance_is_one ? 1.0 : (r.overall_agreement - chance) / (1.0 - chance);
    return r;
}

AgreementReport compare_classifications(const ClassRaster& a, const ClassRaster& b, unsigned workers) {
    return compare_class_grids(a.grid, b.grid, workers);
}

nlohmann::ordered_json agreement_to_json(const AgreementReport& report) {
    nlohmann::ordered_json j;
    j["matrix"] = report.matrix;
    j["overall_agreement"] = report.overall_agreement;
    j["kappa"] = report.kappa;
    j["total_compared"] = report.total_compared;
    return j;
}

} // namespace vegidx
