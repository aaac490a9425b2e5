// Acceptance checks. Prints one PASS/FAIL line per check and exits
// non-zero if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracle.hpp"
#include "../support.hpp"
#include "vegidx/classify.hpp"
#include "vegidx/indices.hpp"
#include "vegidx/pipeline.hpp"
#include "vegidx/preprocess.hpp"
#include "vegidx/report.hpp"
#include "vegidx/stats.hpp"
#include "vegidx/synth.hpp"
#include "vegidx/vgr_io.hpp"

namespace fs = std::filesystem;
using namespace vegidx;
using testing_support::slurp;
using testing_support::TempDir;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool ok;
    std::string detail;
};

SceneSpec reference_scene_spec() {
    SceneSpec s;
    s.width = 100;
    s.height = 100;
    s.kind = IndexKind{Index::Ndvi};
    s.thresholds = ThresholdSet::defaults_for(Index::Ndvi);
    s.fractions = ClassCounts{7615, 1467, 913, 5, 0};
    return s;
}

BandSet all_bands(const RasterGrid& g) {
    return BandSet::from_names(g);
}

Outcome table_fraction_round_trip() {
    const auto t0 = Clock::now();
    const auto spec = reference_scene_spec();
    const auto scene = generate_scene(spec);
    const auto index = compute_index(scene, all_bands(scene), spec.kind);
    const auto classes = classify(index, spec.thresholds);
    const auto j = stats_to_json(compute_stats(classes, index));
    const auto dumped = j.dump(2);
    const double elapsed = seconds_since(t0);

    // Hand tally: 7615/10000 = 76.15; 1467/2385 = 61.509..., 913/2385 = 38.280...,
    // 5/2385 = 0.2096...
    const auto reparsed = nlohmann::json::parse(dumped);
    const bool ok = reparsed["classes"]["non_vegetation"]["pct"].get<double>() == 76.15 &&
                    reparsed["vegetation_subdivision"]["stress_pct"].get<double>() == 61.51 &&
                    reparsed["vegetation_subdivision"]["moderate_pct"].get<double>() == 38.28 &&
                    reparsed["vegetation_subdivision"]["dense_pct"].get<double>() == 0.21 &&
                    reparsed["classes"]["non_vegetation"]["count"].get<std::uint64_t>() == 7615 &&
                    elapsed < 1.0;
    std::ostringstream d;
    d << "non_vegetation=" << reparsed["classes"]["non_vegetation"]["pct"].dump()
      << " subdivision=" << reparsed["vegetation_subdivision"].dump() << " in " << elapsed << " s";
    return {ok, d.str()};
}

Outcome threshold_boundaries() {
    int passed = 0;
    int total = 0;
    std::string first_failure;
    for (Index idx : kAllIndices) {
        const auto t = ThresholdSet::defaults_for(idx);
        const std::array<double, 3> edges{t.t0, t.t1, t.t2};
        for (std::size_t k = 0; k < 3; ++k) {
            const float at = static_cast<float>(edges[k]);
            const float above = std::nextafter(at, 2.0f);
            const std::vector<float> values{at, above};
            IndexRaster raster{RasterGrid(2, 1, {std::string(index_name(idx))}, values), IndexKind{idx}};
            const auto classes = classify(raster, t);
            const auto codes = classes.grid.band_u8(0);
            const int lower = static_cast<int>(k) + 1;
            for (int side = 0; side < 2; ++side) {
                ++total;
                const int want = lower + side;
                const int oracle_bin = oracle::bin_of(values[side], static_cast<float>(t.t0),
                                                      static_cast<float>(t.t1), static_cast<float>(t.t2));
                if (codes[side] == want && oracle_bin == want) {
                    ++passed;
                } else if (first_failure.empty()) {
                    first_failure = std::string(index_label(idx)) + " t" + std::to_string(k) +
                                    (side ? " above" : " at") + " -> " + std::to_string(codes[side]);
                }
            }
        }
    }
    std::string detail = std::to_string(passed) + "/" + std::to_string(total) + " cases";
    if (!first_failure.empty()) detail += "; first failure " + first_failure;
    return {passed == 24 && total == 24, detail};
}

Outcome savi_ndvi_identity() {
    constexpr std::size_t n = 100;
    std::vector<float> data(2 * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            data[i * n + j] = static_cast<float>(static_cast<double>(i) / 99.0);         // red
            data[n * n + i * n + j] = static_cast<float>(static_cast<double>(j) / 99.0); // nir
        }
    const RasterGrid grid(n, n, {"red", "nir"}, data);
    const auto bands = all_bands(grid);
    const auto ndvi = compute_ndvi(grid, bands);
    const auto savi = compute_savi(grid, bands, 0.0);
    const auto a = ndvi.grid.band_f32(0);
    const auto b = savi.grid.band_f32(0);
    double worst = 0.0;
    std::size_t compared = 0;
    bool nodata_agree = true;
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (std::isnan(a[p]) != std::isnan(b[p])) nodata_agree = false;
        if (std::isnan(a[p]) || std::isnan(b[p])) continue;
        worst = std::max(worst, std::abs(static_cast<double>(a[p]) - static_cast<double>(b[p])));
        ++compared;
    }
    std::ostringstream d;
    d << "max |SAVI(L=0) - NDVI| = " << worst << " over " << compared << " pixels";
    return {nodata_agree && worst <= 1e-12 && compared >= n * n - 1, d.str()};
}

Outcome scale_invariance() {
    // Dyadic reflectances k/64 stay exact after multiplying by 2.5.
    constexpr std::size_t n = 100;
    std::mt19937 rng(20240611u);
    std::uniform_int_distribution<int> k(0, 64);
    std::vector<float> data(4 * n * n);
    for (auto& v : data) v = static_cast<float>(k(rng)) / 64.0f;
    const RasterGrid grid(n, n, {"red", "green", "blue", "nir"}, data);
    PreprocessSpec pre;
    pre.scale = 2.5;
    const RasterGrid scaled = radiometric_scale(grid, pre);
    const auto bands = all_bands(grid);

    auto worst_relative = [&](const IndexKind& kind, bool& nodata_agree) {
        const auto a = compute_index(grid, bands, kind);
        const auto b = compute_index(scaled, bands, kind);
        const auto x = a.grid.band_f32(0);
        const auto y = b.grid.band_f32(0);
        double worst = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p) {
            if (std::isnan(x[p]) != std::isnan(y[p])) nodata_agree = false;
            if (std::isnan(x[p]) || std::isnan(y[p])) continue;
            const double diff = std::abs(static_cast<double>(x[p]) - static_cast<double>(y[p]));
            const double ref = std::abs(static_cast<double>(x[p]));
            worst = std::max(worst, ref > 0.0 ? diff / ref : (diff > 0.0 ? INFINITY : 0.0));
        }
        return worst;
    };
    auto worst_absolute = [&](const IndexKind& kind) {
        const auto a = compute_index(grid, bands, kind);
        const auto b = compute_index(scaled, bands, kind);
        const auto x = a.grid.band_f32(0);
        const auto y = b.grid.band_f32(0);
        double worst = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
            if (!std::isnan(x[p]) && !std::isnan(y[p]))
                worst = std::max(worst, std::abs(static_cast<double>(x[p]) - static_cast<double>(y[p])));
        return worst;
    };

    bool nodata_agree = true;
    const double ndvi = worst_relative(IndexKind{Index::Ndvi}, nodata_agree);
    const double vari = worst_relative(IndexKind{Index::Vari}, nodata_agree);
    const double mgrvi = worst_relative(IndexKind{Index::Mgrvi}, nodata_agree);
    const double savi = worst_absolute(IndexKind{Index::Savi, 0.5});
    std::ostringstream d;
    d << "relative change ndvi=" << ndvi << " vari=" << vari << " mgrvi=" << mgrvi
      << "; max savi change=" << savi;
    const bool ok = nodata_agree && ndvi <= 1e-9 && vari <= 1e-9 && mgrvi <= 1e-9 && savi > 1e-3;
    return {ok, d.str()};
}

std::vector<std::string> diff_trees(const fs::path& a, const fs::path& b, std::size_t& compared) {
    std::vector<std::string> mismatches;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        ++compared;
        if (!fs::exists(b / name) || slurp(entry.path()) != slurp(b / name))
            mismatches.push_back(name.string());
    }
    for (const auto& entry : fs::directory_iterator(b))
        if (!fs::exists(a / entry.path().filename())) mismatches.push_back(entry.path().filename().string());
    return mismatches;
}

Outcome partition_determinism() {
    TempDir dir;
    write_vgr(generate_scene(reference_scene_spec()), dir / "scene.vgr");
    auto run = [&](unsigned workers, const std::string& out) {
        PipelineConfig cfg;
        cfg.input = dir / "scene.vgr";
        cfg.indices = {Index::Ndvi, Index::Savi, Index::Vari, Index::Mgrvi};
        cfg.output_dir = dir / out;
        cfg.workers = workers;
        run_pipeline(cfg);
    };
    run(1, "w1");
    run(8, "w8");
    std::size_t compared = 0;
    const auto mismatches = diff_trees(dir / "w1", dir / "w8", compared);
    std::string detail = std::to_string(compared) + " files compared";
    if (!mismatches.empty()) detail += "; differs: " + mismatches.front();
    return {mismatches.empty() && compared > 0, detail};
}

Outcome agreement_oracle() {
    const std::vector<std::uint8_t> a{2, 2, 3};
    const std::vector<std::uint8_t> b{2, 3, 3};
    const auto report = compare_class_grids(RasterGrid(3, 1, {"class"}, a), RasterGrid(3, 1, {"class"}, b));
    const auto brute = oracle::agreement(std::vector<int>(a.begin(), a.end()), std::vector<int>(b.begin(), b.end()));
    std::ostringstream d;
    d.precision(9);
    d << "overall_agreement=" << report.overall_agreement << " kappa=" << report.kappa
      << " (brute force " << brute.overall << ", " << brute.kappa << ")";
    const bool ok = std::abs(report.overall_agreement - 0.666667) <= 1e-6 && std::abs(report.kappa - 0.4) <= 1e-6 &&
                    std::abs(brute.overall - 0.666667) <= 1e-6 && std::abs(brute.kappa - 0.4) <= 1e-6 &&
                    report.total_compared == 3;
    return {ok, d.str()};
}

Outcome percentage_closure() {
    std::mt19937_64 rng(0x5eedu);
    std::uniform_int_distribution<std::size_t> dim(1, 60);
    std::uniform_int_distribution<int> pick(0, 3);
    int failures = 0;
    int veg_checked = 0;
    std::string first_failure;
    for (int trial = 0; trial < 50; ++trial) {
        SceneSpec s;
        s.width = dim(rng);
        s.height = dim(rng);
        s.kind = IndexKind{kAllIndices[static_cast<std::size_t>(pick(rng))]};
        s.thresholds = ThresholdSet::defaults_for(s.kind.index);
        // Random cut points split width*height across the five buckets;
        // every fifth trial has no vegetation at all.
        const std::uint64_t n = s.width * s.height;
        std::uniform_int_distribution<std::uint64_t> cut(0, n);
        std::array<std::uint64_t, 4> cuts{cut(rng), cut(rng), cut(rng), cut(rng)};
        std::sort(cuts.begin(), cuts.end());
        std::uint64_t nodata = std::min<std::uint64_t>(cuts[0], n - 1);
        s.fractions.nodata = nodata;
        if (trial % 5 == 4) {
            s.fractions.non_vegetation = n - nodata;
        } else {
            s.fractions.non_vegetation = std::max(cuts[1], nodata + 1) - nodata;
            const std::uint64_t used = nodata + s.fractions.non_vegetation;
            const std::uint64_t c2 = std::clamp(cuts[2], used, n);
            const std::uint64_t c3 = std::clamp(cuts[3], c2, n);
            s.fractions.stress = c2 - used;
            s.fractions.moderate = c3 - c2;
            s.fractions.dense = n - c3;
        }
        const auto scene = generate_scene(s);
        const auto index = compute_index(scene, all_bands(scene), s.kind);
        const auto stats = compute_stats(classify(index, s.thresholds), index);

        auto hundredths = [](double pct) { return std::llround(pct * 100.0); };
        long long total = 0;
        for (double p : stats.exported_pct_of_total()) total += hundredths(p);
        bool ok = std::llabs(total - 10000) <= 1;
        if (stats.veg_total() > 0) {
            ++veg_checked;
            long long veg = 0;
            for (double p : stats.exported_pct_of_vegetation()) veg += hundredths(p);
            ok = ok && std::llabs(veg - 10000) <= 1;
        }
        const auto& c = s.fractions;
        ok = ok && stats.counts[1] == c.non_vegetation && stats.counts[2] == c.stress &&
             stats.counts[3] == c.moderate && stats.counts[4] == c.dense;
        if (!ok) {
            ++failures;
            if (first_failure.empty()) first_failure = "trial " + std::to_string(trial);
        }
    }
    std::string detail = "50 specs, " + std::to_string(veg_checked) + " with vegetation, " +
                         std::to_string(failures) + " failures";
    if (!first_failure.empty()) detail += "; first " + first_failure;
    return {failures == 0 && veg_checked > 0, detail};
}

Outcome renderer_golden_files() {
    TempDir dir;
    write_vgr(generate_scene(reference_scene_spec()), dir / "scene.vgr");
    PipelineConfig cfg;
    cfg.input = dir / "scene.vgr";
    cfg.indices = {Index::Ndvi};
    cfg.output_dir = dir / "out";
    run_pipeline(cfg);
    const fs::path golden = VEGIDX_GOLDEN_DIR;
    std::vector<std::string> mismatches;
    for (const char* name : {"ndvi_map.ppm", "ndvi_pie_total.svg", "ndvi_pie_veg.svg"}) {
        const auto want = slurp(golden / name);
        if (want.empty() || slurp(dir / "out" / name) != want) mismatches.emplace_back(name);
    }
    std::string detail = "3 files";
    if (!mismatches.empty()) detail += "; differs: " + mismatches.front();
    return {mismatches.empty(), detail};
}

Outcome performance() {
    TempDir dir;
    SceneSpec s;
    s.width = 2048;
    s.height = 2048;
    s.kind = IndexKind{Index::Ndvi};
    s.thresholds = ThresholdSet::defaults_for(Index::Ndvi);
    s.fractions = ClassCounts{2000000, 1000000, 1000000, 194304, 0};
    write_vgr(generate_scene(s), dir / "scene.vgr");

    PipelineConfig cfg;
    cfg.input = dir / "scene.vgr";
    cfg.indices = {Index::Ndvi, Index::Savi, Index::Vari, Index::Mgrvi};
    cfg.output_dir = dir / "out";
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    const auto t0 = Clock::now();
    const auto written = run_pipeline(cfg);
    const double elapsed = seconds_since(t0);

    std::size_t agreements = 0;
    for (const auto& p : written)
        if (p.filename().string().starts_with("agreement_")) ++agreements;
    std::ostringstream d;
    d << written.size() << " files, " << agreements << " agreement reports in " << elapsed << " s with "
      << cfg.workers << " worker(s)";
    return {elapsed < 5.0 && agreements == 6 && written.size() == 34, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"table fraction round-trip", table_fraction_round_trip},
        {"threshold boundaries", threshold_boundaries},
        {"SAVI(L=0) equals NDVI", savi_ndvi_identity},
        {"scale invariance", scale_invariance},
        {"partition determinism", partition_determinism},
        {"agreement oracle", agreement_oracle},
        {"percentage closure", percentage_closure},
        {"renderer golden files", renderer_golden_files},
        {"performance", performance},
    };
    int failed = 0;
    int number = 0;
    for (const auto& [name, check] : criteria) {
        ++number;
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.ok) ++failed;
        std::printf("[%s] %d. %s: %s\n", outcome.ok ? "PASS" : "FAIL", number, name.c_str(),
                    outcome.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", number - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
