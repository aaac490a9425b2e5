#include "vegidx/report.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vegidx/error.hpp"
#include "vegidx/parallel.hpp"
#include "vegidx/pipeline.hpp"
#include "vegidx/text_format.hpp"

namespace vegidx {

std::vector<std::uint8_t> encode_health_map(const RasterGrid& classes, const ColorTable& colors, unsigned workers) {
    const auto codes = classes.band_u8(0);
    const std::string header =
        "P6\n" + std::to_string(classes.width()) + " " + std::to_string(classes.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t at = out.size();
    out.resize(at + 3 * codes.size());
    const std::size_t w = classes.width();
    for_row_blocks(classes.height(), workers, [&](std::size_t, std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0 * w; i < r1 * w; ++i) {
            const std::uint8_t c = codes[i];
            if (c >= kClassCount) throw Error(ErrorCode::ValueOutOfRange, "class code " + std::to_string(c));
            const Rgb& rgb = colors.colors[c];
            out[at + 3 * i] = rgb.r;
            out[at + 3 * i + 1] = rgb.g;
            out[at + 3 * i + 2] = rgb.b;
        }
    });
    return out;
}

void render_health_map(const ClassRaster& classes, const ColorTable& colors, const std::filesystem::path& path,
                       unsigned workers) {
    const auto bytes = encode_health_map(classes.grid, colors, workers);
    write_text_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

PieMode parse_pie_mode(std::string_view name) {
    if (name == "total") return PieMode::Total;
    if (name == "vegetation") return PieMode::Vegetation;
    throw Error(ErrorCode::InvalidConfig, "pie mode must be 'total' or 'vegetation'");
}

std::vector<PieSlice> pie_slices(const ClassStats& stats, PieMode mode) {
    std::vector<HealthClass> order;
    std::vector<double> pct;
    std::uint64_t total = 0;
    if (mode == PieMode::Total) {
        order = {HealthClass::NonVegetation, HealthClass::Stress, HealthClass::Moderate, HealthClass::Dense};
        const auto p = stats.exported_pct_of_total();
        pct.assign(p.begin(), p.end());
        total = stats.total_valid;
    } else {
        order = {HealthClass::Stress, HealthClass::Moderate, HealthClass::Dense};
        const auto p = stats.exported_pct_of_vegetation();
        pct.assign(p.begin(), p.end());
        total = stats.veg_total();
    }
    if (total == 0)
        throw Error(ErrorCode::EmptyStats, mode == PieMode::Total ? "no valid pixels" : "no vegetation pixels");

    std::vector<PieSlice> slices;
    std::uint64_t cumulative = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::uint64_t count = stats.counts[static_cast<std::size_t>(order[i])];
        if (count == 0) continue;
        const double start = 360.0 * static_cast<double>(cumulative) / static_cast<double>(total);
        cumulative += count;
        const double end = 360.0 * static_cast<double>(cumulative) / static_cast<double>(total);
        slices.push_back({order[i], start, end - start, pct[i]});
    }
    return slices;
}

namespace {

constexpr double kCentre = 200.0;
constexpr double kRadius = 160.0;
constexpr double kLabelRadius = 100.0;

struct Point {
    double x, y;
};

// Clockwise from 12 o'clock in SVG's y-down frame.
Point on_circle(double deg, double radius) {
    const double rad = deg * std::numbers::pi / 180.0;
    return {kCentre + radius * std::sin(rad), kCentre - radius * std::cos(rad)};
}

std::string coord(const Point& p) { return format_fixed(p.x, 6) + " " + format_fixed(p.y, 6); }

std::string hex(const Rgb& c) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s = "#";
    for (std::uint8_t v : {c.r, c.g, c.b}) {
        s += digits[v >> 4];
        s += digits[v & 15];
    }
    return s;
}

} // namespace

std::string render_pie_svg(const ClassStats& stats, const ColorTable& colors, PieMode mode) {
    const auto slices = pie_slices(stats, mode);
    const std::string title = std::string(index_label(stats.kind.index)) +
                              (mode == PieMode::Total ? " classes (share of valid area)"
                                                      : " vegetation health (share of vegetated area)");
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n"
        << "  <title>" << title << "</title>\n";
    for (const auto& s : slices) {
        std::string d;
        if (slices.size() == 1) {
            d = "M " + coord(on_circle(0.0, kRadius)) + " A 160 160 0 1 1 " + coord(on_circle(180.0, kRadius)) +
                " A 160 160 0 1 1 " + coord(on_circle(0.0, kRadius)) + " Z";
        } else {
            const int large_arc = s.sweep_deg > 180.0 ? 1 : 0;
            d = "M " + coord({kCentre, kCentre}) + " L " + coord(on_circle(s.start_deg, kRadius)) +
                " A 160 160 0 " + std::to_string(large_arc) + " 1 " +
                coord(on_circle(s.start_deg + s.sweep_deg, kRadius)) + " Z";
        }
        svg << "  <path data-class=\"" << class_key(s.cls) << "\" d=\"" << d << "\" fill=\"" << hex(colors[s.cls])
            << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }
    for (const auto& s : slices) {
        const Point at = slices.size() == 1 ? Point{kCentre, kCentre}
                                            : on_circle(s.start_deg + s.sweep_deg / 2.0, kLabelRadius);
        svg << "  <text x=\"" << format_fixed(at.x, 6) << "\" y=\"" << format_fixed(at.y, 6)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << class_label(s.cls) << ' '
            << format_fixed(s.pct, 2) << "%</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_empty_vegetation_pie_svg(Index index) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n"
           "  <title>" +
           std::string(index_label(index)) +
           " vegetation health (share of vegetated area)</title>\n"
           "  <circle cx=\"200\" cy=\"200\" r=\"160\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n"
           "  <text x=\"200\" y=\"200\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">no vegetated pixels</text>\n"
           "</svg>\n";
}

void render_pie(const ClassStats& stats, const ColorTable& colors, const std::filesystem::path& path, PieMode mode) {
    write_text_file(path, render_pie_svg(stats, colors, mode));
}

} // namespace vegidx
