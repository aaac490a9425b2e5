#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vegidx/indices.hpp"
#include "vegidx/preprocess.hpp"
#include "vegidx/raster.hpp"

namespace vegidx {

/// A band chosen by name or by zero-based position.
using BandRef = std::variant<std::string, std::size_t>;

/// Parses "nir" as a name and "3" as an index.
BandRef parse_band_ref(std::string_view text);

/// Explicit refs win; roles without one fall back to a band of the same name.
BandSet resolve_bands(const RasterGrid& grid, const std::map<BandRole, BandRef>& refs);

struct PipelineConfig {
    std::filesystem::path input;
    std::map<BandRole, BandRef> bands;
    std::vector<Index> indices;
    double savi_l = 0.5;
    std::map<Index, std::filesystem::path> threshold_files;
    std::filesystem::path output_dir;
    PreprocessSpec preprocess;
    bool render = true;
    unsigned workers = 1;
    bool force = false;

    static PipelineConfig from_json(const nlohmann::json& j);
};

/// Files run_pipeline writes for one index, in write order.
std::vector<std::string> index_artifact_names(Index index, bool render);
std::string agreement_artifact_name(Index a, Index b);

/// Index pairs compared by the pipeline, in canonical index order.
std::vector<std::pair<Index, Index>> agreement_pairs(const std::vector<Index>& indices);

/// Runs every stage for each requested index and the pairwise agreement
/// step. Everything is validated before the first file is written.
/// Returns the paths written.
std::vector<std::filesystem::path> run_pipeline(const PipelineConfig& config);

/// Throws InvalidConfig if `path` exists and overwriting is not allowed.
void ensure_writable(const std::filesystem::path& path, bool force);

/// Writes a text file byte-for-byte.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace vegidx
