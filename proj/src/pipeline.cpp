#include "vegidx/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vegidx/classify.hpp"
#include "vegidx/error.hpp"
#include "vegidx/report.hpp"
#include "vegidx/stats.hpp"
#include "vegidx/vgr_io.hpp"

namespace vegidx {

BandRef parse_band_ref(std::string_view text) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), idx);
    if (!text.empty() && ec == std::errc() && ptr == text.data() + text.size()) return idx;
    return std::string(text);
}

BandSet resolve_bands(const RasterGrid& grid, const std::map<BandRole, BandRef>& refs) {
    BandSet set = BandSet::from_names(grid);
    for (const auto& [role, ref] : refs) {
        std::optional<std::size_t> idx;
        if (const auto* name = std::get_if<std::string>(&ref)) {
            idx = grid.find_band(*name);
            if (!idx)
                throw Error(ErrorCode::InvalidConfig,
                            std::string(role_name(role)) + " band '" + *name + "' not found in input");
        } else {
            idx = std::get<std::size_t>(ref);
            if (*idx >= grid.band_count())
                throw Error(ErrorCode::InvalidConfig, std::string(role_name(role)) + " band index " +
                                                          std::to_string(*idx) + " out of range");
        }
        switch (role) {
        case BandRole::Red: set.red = idx; break;
        case BandRole::Green: set.green = idx; break;
        case BandRole::Blue: set.blue = idx; break;
        case BandRole::Nir: set.nir = idx; break;
        }
    }
    try {
        set.validate(grid);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return set;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    try {
        PipelineConfig c;
        c.input = j.at("input").get<std::string>();
        c.output_dir = j.contains("output_dir") ? j.at("output_dir").get<std::string>()
                                                : j.at("out").get<std::string>();
        for (const auto& name : j.at("indices")) c.indices.push_back(parse_index(name.get<std::string>()));
        if (j.contains("bands")) {
            for (const auto& [key, value] : j.at("bands").items()) {
                std::optional<BandRole> role;
                for (BandRole r : {BandRole::Red, BandRole::Green, BandRole::Blue, BandRole::Nir})
                    if (role_name(r) == key) role = r;
                if (!role) throw Error(ErrorCode::InvalidConfig, "unknown band role '" + key + "'");
                if (value.is_number_unsigned())
                    c.bands[*role] = value.get<std::size_t>();
                else
                    c.bands[*role] = value.get<std::string>();
            }
        }
        c.savi_l = j.value("savi_l", c.savi_l);
        if (j.contains("thresholds"))
            for (const auto& [key, value] : j.at("thresholds").items())
                c.threshold_files[parse_index(key)] = value.get<std::string>();
        if (j.contains("preprocess")) {
            const auto& p = j.at("preprocess");
            c.preprocess.scale = p.value("scale", 1.0);
            c.preprocess.clamp_to_unit = p.value("clamp_to_unit", false);
            c.preprocess.median3 = p.value("median3", false);
        }
        c.render = j.value("render", true);
        c.workers = j.value("workers", 1u);
        c.force = j.value("force", false);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed pipeline config: ") + e.what());
    }
}

std::vector<std::string> index_artifact_names(Index index, bool render) {
    const std::string n(index_name(index));
    std::vector<std::string> names{n + ".vgr", n + "_classes.vgr", n + "_stats.json", n + "_stats.csv"};
    if (render) {
        names.push_back(n + "_map.ppm");
        names.push_back(n + "_pie_total.svg");
        names.push_back(n + "_pie_veg.svg");
    }
    return names;
}

std::string agreement_artifact_name(Index a, Index b) {
    return "agreement_" + std::string(index_name(a)) + "_vs_" + std::string(index_name(b)) + ".json";
}

std::vector<std::pair<Index, Index>> agreement_pairs(const std::vector<Index>& indices) {
    std::vector<Index> sorted;
    for (Index i : kAllIndices)
        if (std::find(indices.begin(), indices.end(), i) != indices.end()) sorted.push_back(i);
    std::vector<std::pair<Index, Index>> pairs;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t k = i + 1; k < sorted.size(); ++k) pairs.emplace_back(sorted[i], sorted[k]);
    return pairs;
}

void ensure_writable(const std::filesystem::path& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw Error(ErrorCode::InvalidConfig, path.string() + " exists; pass --force to overwrite");
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> run_pipeline(const PipelineConfig& config) {
    if (config.indices.empty()) throw Error(ErrorCode::InvalidConfig, "no indices requested");
    if (std::set<Index>(config.indices.begin(), config.indices.end()).size() != config.indices.size())
        throw Error(ErrorCode::InvalidConfig, "an index is requested twice");
    if (config.output_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory");
    if (config.workers == 0) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
    if (!std::isfinite(config.savi_l) || config.savi_l < 0.0)
        throw Error(ErrorCode::InvalidConfig, "SAVI L must be finite and >= 0");
    if (!(config.preprocess.scale > 0.0) || !std::isfinite(config.preprocess.scale))
        throw Error(ErrorCode::InvalidConfig, "preprocess scale must be finite and > 0");

    RasterGrid input = read_vgr(config.input);
    if (input.dtype() != DType::Float32) throw Error(ErrorCode::UnsupportedDtype, "band input must be float32");
    const BandSet bands = resolve_bands(input, config.bands);

    std::map<Index, ThresholdSet> thresholds;
    for (Index index : config.indices) {
        for (BandRole role : needs_nir(index) ? std::vector<BandRole>{BandRole::Nir, BandRole::Red}
                             : index == Index::Vari
                                 ? std::vector<BandRole>{BandRole::Red, BandRole::Green, BandRole::Blue}
                                 : std::vector<BandRole>{BandRole::Red, BandRole::Green})
            if (!bands.get(role))
                throw Error(ErrorCode::InvalidConfig, std::string(index_label(index)) + " needs a " +
                                                          std::string(role_name(role)) + " band");
        const auto it = config.threshold_files.find(index);
        thresholds[index] = load_thresholds(it == config.threshold_files.end()
                                                ? std::nullopt
                                                : std::optional<std::filesystem::path>(it->second),
                                            IndexKind{index, config.savi_l});
    }

    const auto pairs = agreement_pairs(config.indices);
    std::vector<std::filesystem::path> planned;
    for (Index index : config.indices)
        for (const auto& name : index_artifact_names(index, config.render))
            planned.push_back(config.output_dir / name);
    for (const auto& [a, b] : pairs) planned.push_back(config.output_dir / agreement_artifact_name(a, b));
    for (const auto& path : planned) ensure_writable(path, config.force);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + config.output_dir.string() + ": " + ec.message());

    const unsigned workers = config.workers;
    if (!config.preprocess.is_identity()) input = apply_preprocess(input, config.preprocess, workers);

    const ColorTable colors;
    std::map<Index, ClassRaster> class_rasters;
    std::vector<std::filesystem::path> written;
    auto out = [&](const std::string& name) {
        written.push_back(config.output_dir / name);
        return written.back();
    };

    for (Index index : config.indices) {
        const std::string n(index_name(index));
        const IndexRaster raster = compute_index(input, bands, IndexKind{index, config.savi_l}, workers);
        write_vgr(raster.grid, out(n + ".vgr"));
        ClassRaster classes = classify(raster, thresholds.at(index), workers);
        write_vgr(classes.grid, out(n + "_classes.vgr"));
        const ClassStats stats = compute_stats(classes, raster, workers);
        write_text_file(out(n + "_stats.json"), stats_to_json(stats).dump(2) + "\n");
        write_text_file(out(n + "_stats.csv"), stats_to_csv(stats));
        if (config.render) {
            render_health_map(classes, colors, out(n + "_map.ppm"), workers);
            render_pie(stats, colors, out(n + "_pie_total.svg"), PieMode::Total);
            if (stats.veg_total() > 0)
                render_pie(stats, colors, out(n + "_pie_veg.svg"), PieMode::Vegetation);
            else
                write_text_file(out(n + "_pie_veg.svg"), render_empty_vegetation_pie_svg(index));
        }
        class_rasters.emplace(index, std::move(classes));
    }

    for (const auto& [a, b] : pairs) {
        const AgreementReport report = compare_classifications(class_rasters.at(a), class_rasters.at(b), workers);
        write_text_file(out(agreement_artifact_name(a, b)), agreement_to_json(report).dump(2) + "\n");
    }
    return written;
}

} // namespace vegidx
