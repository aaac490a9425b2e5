#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "vegidx/classify.hpp"

namespace vegidx {

/// Per-class tallies of one ClassRaster. Arrays are indexed by class code;
/// slot 0 (nodata) is always zero.
struct ClassStats {
    IndexKind kind;
    ThresholdSet thresholds;
    std::uint64_t total_valid = 0;
    std::array<std::uint64_t, kClassCount> counts{};
    double index_min = 0.0;
    double index_max = 0.0;

    std::uint64_t veg_total() const noexcept { return counts[2] + counts[3] + counts[4]; }

    /// Full-precision percentage of total_valid for class codes 1..4.
    double pct_of_total(HealthClass c) const;
    /// Full-precision percentage of veg_total for stress/moderate/dense.
    double pct_of_vegetation(HealthClass c) const;

    /// Two-decimal export values for classes 1..4 (index 0 = non-vegetation).
    std::array<double, 4> exported_pct_of_total() const;
    /// Two-decimal export values for stress, moderate, dense.
    std::array<double, 3> exported_pct_of_vegetation() const;
};

ClassStats compute_stats(const ClassRaster& classes, const IndexRaster& index, unsigned workers = 1);

/// Shares of `total` in hundredths of a percent, each rounded half-up to
/// the nearest hundredth. When that leaves the sum more than one hundredth
/// away from 10000, entries with the largest rounding error are nudged
/// back until it is within one. All zero if total is 0.
template <std::size_t N>
std::array<std::uint64_t, N> percent_hundredths(const std::array<std::uint64_t, N>& parts, std::uint64_t total) {
    std::array<std::uint64_t, N> units{};
    if (total == 0) return units;
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < N; ++i) {
        units[i] = (parts[i] * 20000 + total) / (2 * total);
        sum += static_cast<std::int64_t>(units[i]);
    }
    // Signed rounding error of entry i, scaled by total.
    auto error = [&](std::size_t i) {
        return static_cast<std::int64_t>(units[i] * total) - static_cast<std::int64_t>(parts[i] * 10000);
    };
    while (sum > 10001) {
        std::size_t pick = N;
        for (std::size_t i = 0; i < N; ++i)
            if (units[i] > 0 && (pick == N || error(i) > error(pick))) pick = i;
        --units[pick];
        --sum;
    }
    while (sum < 9999) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < N; ++i)
            if (error(i) < error(pick)) pick = i;
        ++units[pick];
        ++sum;
    }
    return units;
}

nlohmann::ordered_json stats_to_json(const ClassStats& stats);
ClassStats stats_from_json(const nlohmann::json& j);
std::string stats_to_csv(const ClassStats& stats);

struct AgreementReport {
    // rows: classes of A, columns: classes of B, codes 1..4 at [code-1]
    std::array<std::array<std::uint64_t, 4>, 4> matrix{};
    double overall_agreement = 0.0;
    double kappa = 0.0;
    std::uint64_t total_compared = 0;
};

AgreementReport compare_classifications(const ClassRaster& a, const ClassRaster& b, unsigned workers = 1);
AgreementReport compare_class_grids(const RasterGrid& a, const RasterGrid& b, unsigned workers = 1);

nlohmann::ordered_json agreement_to_json(const AgreementReport& report);

} // namespace vegidx
