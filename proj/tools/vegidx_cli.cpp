// vegidx command-line front-end. Each subcommand wraps one library
// operation; `run` chains them for a whole band raster.
//
// Exit status: 0 success, 2 bad configuration, 3 I/O failure, 4 data error.

#include <iostream>
#include <map>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vegidx/classify.hpp"
#include "vegidx/error.hpp"
#include "vegidx/indices.hpp"
#include "vegidx/pipeline.hpp"
#include "vegidx/preprocess.hpp"
#include "vegidx/report.hpp"
#include "vegidx/stats.hpp"
#include "vegidx/synth.hpp"
#include "vegidx/vgr_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

using vegidx::BandRole;

struct BandFlags {
    std::string red, green, blue, nir;

    void attach(CLI::App* app) {
        app->add_option("--red", red, "Red band name or zero-based index");
        app->add_option("--green", green, "Green band name or zero-based index");
        app->add_option("--blue", blue, "Blue band name or zero-based index");
        app->add_option("--nir", nir, "Near-infrared band name or zero-based index");
    }

    std::map<BandRole, vegidx::BandRef> refs() const {
        std::map<BandRole, vegidx::BandRef> out;
        if (!red.empty()) out[BandRole::Red] = vegidx::parse_band_ref(red);
        if (!green.empty()) out[BandRole::Green] = vegidx::parse_band_ref(green);
        if (!blue.empty()) out[BandRole::Blue] = vegidx::parse_band_ref(blue);
        if (!nir.empty()) out[BandRole::Nir] = vegidx::parse_band_ref(nir);
        return out;
    }
};

void write_json(const std::string& path, const nlohmann::ordered_json& j, bool force) {
    vegidx::ensure_writable(path, force);
    vegidx::write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
    const std::string text = vegidx::read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw vegidx::Error(vegidx::ErrorCode::ParseError, path + ": " + e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vegetation index rasters: compute, classify, summarize, and render."};
    app.require_subcommand(1);

    unsigned workers = 1;
    bool force = false;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--workers", workers, "Row partitions processed in parallel")->check(CLI::PositiveNumber);
        sub->add_flag("--force", force, "Overwrite existing output files");
    };

    // compute
    std::string in_path, out_path, index_name = "ndvi";
    double savi_l = 0.5;
    BandFlags band_flags;
    auto* compute = app.add_subcommand("compute", "Compute one vegetation index raster from a band raster");
    compute->add_option("--input", in_path, "Band raster (.vgr)")->required();
    compute->add_option("--index", index_name, "ndvi | savi | vari | mgrvi")->required();
    compute->add_option("--savi-l", savi_l, "SAVI soil brightness correction L (default 0.5)");
    compute->add_option("--output", out_path, "Index raster to write (.vgr)")->required();
    band_flags.attach(compute);
    common(compute);

    // classify
    std::string thresholds_path, index_override;
    auto* classify = app.add_subcommand("classify", "Bin an index raster into health classes");
    classify->add_option("--input", in_path, "Index raster (.vgr)")->required();
    classify->add_option("--thresholds", thresholds_path, "JSON {\"t0\",\"t1\",\"t2\"}; defaults per index");
    classify->add_option("--index", index_override, "Override the index kind recorded in the raster");
    classify->add_option("--output", out_path, "Class raster to write (.vgr)")->required();
    common(classify);

    // stats
    std::string classes_path, index_raster_path, csv_path;
    auto* stats = app.add_subcommand("stats", "Per-class counts and percentages");
    stats->add_option("--classes", classes_path, "Class raster (.vgr)")->required();
    stats->add_option("--index-raster", index_raster_path, "Index raster the classes came from")->required();
    stats->add_option("--output", out_path, "Stats JSON to write")->required();
    stats->add_option("--csv", csv_path, "Also write the table-style CSV here");
    common(stats);

    // compare
    std::string a_path, b_path;
    auto* compare = app.add_subcommand("compare", "Confusion matrix, agreement and kappa of two class rasters");
    compare->add_option("--a", a_path, "Class raster A (matrix rows)")->required();
    compare->add_option("--b", b_path, "Class raster B (matrix columns)")->required();
    compare->add_option("--output", out_path, "Agreement JSON to write; stdout when omitted");
    common(compare);

    // render
    auto* render = app.add_subcommand("render", "Health map of a class raster as binary PPM");
    render->add_option("--classes", classes_path, "Class raster (.vgr)")->required();
    render->add_option("--output", out_path, "PPM file to write")->required();
    common(render);

    // pie
    std::string stats_path, mode_name = "total";
    bool allow_empty = false;
    auto* pie = app.add_subcommand("pie", "Pie chart SVG from a stats JSON");
    pie->add_option("--stats", stats_path, "Stats JSON written by `stats`")->required();
    pie->add_option("--mode", mode_name, "total | vegetation");
    pie->add_option("--output", out_path, "SVG file to write")->required();
    pie->add_flag("--allow-empty", allow_empty,
                  "With --mode vegetation, write a placeholder chart instead of failing when no pixel is vegetated");
    common(pie);

    // synth
    std::string spec_path;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic band raster from a scene spec");
    synth->add_option("--spec", spec_path, "Scene spec JSON")->required();
    synth->add_option("--output", out_path, "Band raster to write (.vgr)")->required();
    common(synth);

    // preprocess
    vegidx::PreprocessSpec pre;
    auto* preprocess = app.add_subcommand("preprocess", "Radiometric scaling and optional 3x3 median filter");
    preprocess->add_option("--input", in_path, "Band raster (.vgr)")->required();
    preprocess->add_option("--output", out_path, "Band raster to write (.vgr)")->required();
    preprocess->add_option("--scale", pre.scale, "Multiplier applied to every valid sample");
    preprocess->add_flag("--clamp", pre.clamp_to_unit, "Clamp scaled samples into [0, 1]");
    preprocess->add_flag("--median3", pre.median3, "Apply a 3x3 median filter per band");
    common(preprocess);

    // run
    std::string config_path, out_dir, indices_csv;
    std::vector<std::string> threshold_specs;
    bool no_render = false;
    vegidx::PreprocessSpec run_pre;
    auto* run = app.add_subcommand("run", "Full pipeline: indices, classes, stats, renders, agreement");
    run->add_option("--config", config_path, "Pipeline config JSON; explicit flags override it");
    run->add_option("--input", in_path, "Band raster (.vgr)");
    run->add_option("--indices", indices_csv, "Comma-separated list, e.g. ndvi,savi,vari,mgrvi");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--savi-l", savi_l, "SAVI soil brightness correction L (default 0.5)");
    run->add_option("--thresholds", threshold_specs, "Per-index threshold file, as index=path")->take_all();
    run->add_option("--scale", run_pre.scale, "Radiometric scale applied before index computation");
    run->add_flag("--clamp", run_pre.clamp_to_unit, "Clamp scaled samples into [0, 1]");
    run->add_flag("--median3", run_pre.median3, "Apply a 3x3 median filter before index computation");
    run->add_flag("--no-render", no_render, "Skip the PPM map and SVG pies");
    band_flags.attach(run);
    common(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*compute) {
            const auto grid = vegidx::read_vgr(in_path);
            vegidx::BandSet bands;
            try {
                bands = vegidx::resolve_bands(grid, band_flags.refs());
            } catch (const vegidx::Error& e) {
                throw vegidx::Error(vegidx::ErrorCode::InvalidConfig, e.what());
            }
            const vegidx::IndexKind kind{vegidx::parse_index(index_name), savi_l};
            kind.validate();
            vegidx::ensure_writable(out_path, force);
            vegidx::write_vgr(vegidx::compute_index(grid, bands, kind, workers).grid, out_path);
        } else if (*classify) {
            auto index = vegidx::index_raster_from_grid(vegidx::read_vgr(in_path));
            if (!index_override.empty()) index.kind.index = vegidx::parse_index(index_override);
            const auto thresholds = vegidx::load_thresholds(
                thresholds_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(thresholds_path),
                index.kind);
            vegidx::ensure_writable(out_path, force);
            vegidx::write_vgr(vegidx::classify(index, thresholds, workers).grid, out_path);
        } else if (*stats) {
            const auto classes = vegidx::class_raster_from_grid(vegidx::read_vgr(classes_path));
            const auto index = vegidx::index_raster_from_grid(vegidx::read_vgr(index_raster_path));
            const auto s = vegidx::compute_stats(classes, index, workers);
            if (!csv_path.empty()) vegidx::ensure_writable(csv_path, force);
            write_json(out_path, vegidx::stats_to_json(s), force);
            if (!csv_path.empty()) vegidx::write_text_file(csv_path, vegidx::stats_to_csv(s));
        } else if (*compare) {
            const auto a = vegidx::class_raster_from_grid(vegidx::read_vgr(a_path));
            const auto b = vegidx::class_raster_from_grid(vegidx::read_vgr(b_path));
            const auto report = vegidx::agreement_to_json(vegidx::compare_classifications(a, b, workers));
            if (out_path.empty())
                std::cout << report.dump(2) << "\n";
            else
                write_json(out_path, report, force);
        } else if (*render) {
            const auto classes = vegidx::class_raster_from_grid(vegidx::read_vgr(classes_path));
            vegidx::ensure_writable(out_path, force);
            vegidx::render_health_map(classes, vegidx::ColorTable{}, out_path, workers);
        } else if (*pie) {
            const auto s = vegidx::stats_from_json(read_json(stats_path));
            const auto mode = vegidx::parse_pie_mode(mode_name);
            vegidx::ensure_writable(out_path, force);
            if (allow_empty && mode == vegidx::PieMode::Vegetation && s.veg_total() == 0)
                vegidx::write_text_file(out_path, vegidx::render_empty_vegetation_pie_svg(s.kind.index));
            else
                vegidx::render_pie(s, vegidx::ColorTable{}, out_path, mode);
        } else if (*synth) {
            const auto spec = vegidx::scene_spec_from_json(read_json(spec_path));
            const auto grid = vegidx::generate_scene(spec);
            vegidx::ensure_writable(out_path, force);
            vegidx::write_vgr(grid, out_path);
        } else if (*preprocess) {
            const auto grid = vegidx::read_vgr(in_path);
            const auto out = vegidx::apply_preprocess(grid, pre, workers);
            vegidx::ensure_writable(out_path, force);
            vegidx::write_vgr(out, out_path);
        } else if (*run) {
            vegidx::PipelineConfig config;
            if (!config_path.empty()) config = vegidx::PipelineConfig::from_json(read_json(config_path));
            if (!in_path.empty()) config.input = in_path;
            if (!out_dir.empty()) config.output_dir = out_dir;
            if (!indices_csv.empty()) {
                config.indices.clear();
                std::stringstream ss(indices_csv);
                for (std::string item; std::getline(ss, item, ',');)
                    if (!item.empty()) config.indices.push_back(vegidx::parse_index(item));
            }
            if (run->count("--savi-l")) config.savi_l = savi_l;
            for (const auto& spec : threshold_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw vegidx::Error(vegidx::ErrorCode::InvalidConfig, "--thresholds expects index=path");
                config.threshold_files[vegidx::parse_index(spec.substr(0, eq))] = spec.substr(eq + 1);
            }
            for (const auto& [role, ref] : band_flags.refs()) config.bands[role] = ref;
            if (run->count("--scale")) config.preprocess.scale = run_pre.scale;
            if (run_pre.clamp_to_unit) config.preprocess.clamp_to_unit = true;
            if (run_pre.median3) config.preprocess.median3 = true;
            if (no_render) config.render = false;
            if (run->count("--workers")) config.workers = workers;
            if (force) config.force = true;
            if (config.input.empty())
                throw vegidx::Error(vegidx::ErrorCode::InvalidConfig, "run needs --input or a config file");
            vegidx::run_pipeline(config);
        }
    } catch (const vegidx::Error& e) {
        std::cerr << "vegidx: " << e.what() << "\n";
        switch (vegidx::failure_class(e.code())) {
        case vegidx::FailureClass::Config: return kExitConfig;
        case vegidx::FailureClass::Io: return kExitIo;
        case vegidx::FailureClass::Data: return kExitData;
        }
    } catch (const std::exception& e) {
        std::cerr << "vegidx: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
