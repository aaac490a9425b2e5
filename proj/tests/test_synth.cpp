#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "vegidx/classify.hpp"
#include "vegidx/error.hpp"
#include "vegidx/synth.hpp"

using namespace vegidx;

namespace {

SceneSpec table_scene(Index idx = Index::Ndvi) {
    SceneSpec s;
    s.width = 100;
    s.height = 100;
    s.kind = IndexKind{idx};
    s.thresholds = ThresholdSet::defaults_for(idx);
    s.fractions = {7615, 1467, 913, 5, 0};
    return s;
}

// Tally of classify(compute(scene)) using only the oracle formulas.
std::array<std::uint64_t, 5> oracle_tally(const RasterGrid& g, const SceneSpec& spec) {
    const auto red = g.band_f32(0), green = g.band_f32(1), blue = g.band_f32(2);
    const auto t0 = static_cast<float>(spec.thresholds.t0), t1 = static_cast<float>(spec.thresholds.t1),
               t2 = static_cast<float>(spec.thresholds.t2);
    std::array<std::uint64_t, 5> out{};
    for (std::size_t i = 0; i < g.pixel_count(); ++i) {
        if (std::isnan(red[i])) {
            ++out[0];
            continue;
        }
        std::optional<long double> v;
        switch (spec.kind.index) {
        case Index::Ndvi: v = oracle::ndvi(g.band_f32(3)[i], red[i]); break;
        case Index::Savi: v = oracle::savi(g.band_f32(3)[i], red[i], spec.kind.savi_l); break;
        case Index::Vari: v = oracle::vari(green[i], red[i], blue[i]); break;
        case Index::Mgrvi: v = oracle::mgrvi(green[i], red[i]); break;
        }
        REQUIRE(v.has_value());
        const int c = oracle::bin_of(static_cast<float>(*v), t0, t1, t2);
        REQUIRE(c > 0);
        ++out[static_cast<std::size_t>(c)];
    }
    return out;
}

std::array<std::uint64_t, 5> library_tally(const RasterGrid& g, const SceneSpec& spec) {
    const auto c = classify(compute_index(g, BandSet::from_names(g), spec.kind), spec.thresholds);
    return oracle::tally(c.grid.u8());
}

std::array<std::uint64_t, 5> expected(const ClassCounts& f) {
    return {f.nodata, f.non_vegetation, f.stress, f.moderate, f.dense};
}

} // namespace

TEST_CASE("inversion examples") {
    const AnchorBands anchors;
    const double nir = invert_index(IndexKind{Index::Ndvi}, 0.2, anchors);
    CHECK(nir == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(static_cast<double>(*oracle::ndvi(nir, 0.2)) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(invert_index(IndexKind{Index::Mgrvi}, 0.0, anchors) == doctest::Approx(0.2).epsilon(1e-15));

    // Forward substitution for the other two inversions.
    const double savi_nir = invert_index(IndexKind{Index::Savi, 0.5}, 0.245, anchors);
    CHECK(static_cast<double>(*oracle::savi(savi_nir, 0.2, 0.5)) == doctest::Approx(0.245).epsilon(1e-14));
    const double vari_g = invert_index(IndexKind{Index::Vari}, -0.46, anchors);
    CHECK(static_cast<double>(*oracle::vari(vari_g, 0.2, 0.1)) == doctest::Approx(-0.46).epsilon(1e-14));
}

TEST_CASE("bin midpoints") {
    const auto m = bin_midpoints(ThresholdSet::defaults_for(Index::Ndvi));
    CHECK(m[0] == doctest::Approx(-0.45));
    CHECK(m[1] == doctest::Approx(0.2));
    CHECK(m[2] == doctest::Approx(0.45));
    CHECK(m[3] == doctest::Approx(0.8));
}

TEST_CASE("table-fraction scene round trips for every index") {
    for (Index idx : kAllIndices) {
        const SceneSpec spec = table_scene(idx);
        const RasterGrid g = generate_scene(spec);
        CHECK(g.band_count() == (needs_nir(idx) ? 4u : 3u));
        CHECK(oracle_tally(g, spec) == expected(spec.fractions));
        CHECK(library_tally(g, spec) == expected(spec.fractions));
    }
}

TEST_CASE("raster order is nodata then classes 1..4") {
    SceneSpec spec = table_scene();
    spec.width = 5;
    spec.height = 2;
    spec.fractions = {2, 2, 2, 2, 2};
    const RasterGrid g = generate_scene(spec);
    const auto c = classify(compute_index(g, BandSet::from_names(g), spec.kind), spec.thresholds);
    CHECK(c.grid.u8() == std::vector<std::uint8_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4});
    for (std::size_t b = 0; b < 4; ++b) CHECK(std::isnan(g.band_f32(b)[0]));
}

TEST_CASE("synth errors") {
    SceneSpec spec = table_scene();
    spec.fractions.dense = 6;
    try {
        generate_scene(spec);
        FAIL("expected CountMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CountMismatch);
    }
    CHECK_THROWS_AS(invert_index(IndexKind{Index::Ndvi}, 1.0, AnchorBands{}), Error);

    SceneSpec bad = table_scene(Index::Vari);
    bad.fixed_bands = {0.1, 0.2, 0.3};
    try {
        generate_scene(bad);
        FAIL("expected UninvertibleTarget");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UninvertibleTarget);
    }
}

TEST_CASE("property: random specs reproduce their counts exactly and deterministically") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> edge(-0.6, 0.7);
    int checked = 0;
    while (checked < 60) {
        SceneSpec spec;
        spec.width = 1 + rng() % 40;
        spec.height = 1 + rng() % 40;
        spec.kind = IndexKind{kAllIndices[rng() % 4], 0.1 + 0.9 * static_cast<double>(rng() % 100) / 100.0};
        std::array<double, 3> t{edge(rng), edge(rng), edge(rng)};
        std::sort(t.begin(), t.end());
        if (t[1] - t[0] < 0.02 || t[2] - t[1] < 0.02) continue;
        spec.thresholds = {t[0], t[1], t[2]};
        std::uint64_t left = spec.width * spec.height;
        std::array<std::uint64_t, 5> parts{};
        for (std::size_t i = 0; i < 4; ++i) {
            parts[i] = left == 0 ? 0 : rng() % (left + 1);
            left -= parts[i];
        }
        parts[4] = left;
        std::shuffle(parts.begin(), parts.end(), rng);
        spec.fractions = {parts[0], parts[1], parts[2], parts[3], parts[4]};
        RasterGrid g = [&] {
            try {
                return generate_scene(spec);
            } catch (const Error& e) {
                // Extreme random bins may not invert with the default anchors.
                REQUIRE(e.code() == ErrorCode::UninvertibleTarget);
                return RasterGrid(1, 1, {"x"}, std::vector<float>{0});
            }
        }();
        if (g.band_count() == 1) continue;
        CHECK(library_tally(g, spec) == expected(spec.fractions));
        CHECK(oracle_tally(g, spec) == expected(spec.fractions));
        CHECK(generate_scene(spec) == g);
        ++checked;
    }
}

TEST_CASE("scene spec json") {
    const auto j = nlohmann::json::parse(R"({
        "width": 4, "height": 1, "kind": "savi", "savi_l": 0.25,
        "fractions": {"non_vegetation": 1, "stress": 1, "moderate": 1, "dense": 1, "nodata": 0}
    })");
    const SceneSpec s = scene_spec_from_json(j);
    CHECK(s.kind == IndexKind{Index::Savi, 0.25});
    CHECK(s.thresholds == ThresholdSet::defaults_for(Index::Savi));
    CHECK(s.fixed_bands.red == 0.2);
    const SceneSpec again = scene_spec_from_json(nlohmann::json::parse(scene_spec_to_json(s).dump()));
    CHECK(again.kind == s.kind);
    CHECK(again.thresholds == s.thresholds);
    CHECK(again.fractions.dense == 1);
    CHECK(generate_scene(again) == generate_scene(s));
    CHECK_THROWS_AS(scene_spec_from_json(nlohmann::json::parse(R"({"width": 1})")), Error);
}
