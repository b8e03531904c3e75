#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pcbfeat/color.hpp"
#include "pcbfeat/features.hpp"
#include "pcbfeat/imaging.hpp"
#include "pcbfeat/selection.hpp"
#include "pcbfeat/texture.hpp"

namespace pcbfeat::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Dataset manifest: {"images": [{"id", "image_path", "mask_path", ...}]}
// ---------------------------------------------------------------------------

struct DatasetEntry {
    std::string id;
    fs::path image_path;
    fs::path mask_path;
    std::string board_id;
    std::string side;
};

struct Dataset {
    std::vector<DatasetEntry> images;
};

/// Relative paths resolve against the manifest's directory.
Dataset load_dataset(const fs::path& manifest);
void save_dataset(const fs::path& manifest, const Dataset& dataset);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct PipelineConfig {
    fs::path dataset;
    std::vector<int> ksizes{5, 10, 15, 20, 25};
    std::vector<Family> families{Family::color, Family::shape, Family::texture};
    color::ColorFeatureSpec color;
    texture::TextureSpec texture;
    selection::ForestConfig forest;
    fs::path output_dir{"pcbfeat_out"};
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = OpenMP default
    std::size_t top_k = 5;

    void validate() const;
    bool has_family(Family f) const;
};

/// JSON form. `include_workers` is false for anything that must not depend
/// on the worker count (run manifest, config hash).
std::string config_to_json(const PipelineConfig& config, bool include_workers = true);
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const fs::path& path);
void save_config(const fs::path& path, const PipelineConfig& config);

/// FNV-1a 64 over the worker-independent JSON form, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Feature CSV: header = feature names + "label", one row per region.
// ---------------------------------------------------------------------------

std::string format_number(double v);
void write_feature_csv(const fs::path& path, const FeatureBlock& block, const std::vector<RegionLabel>& labels);
selection::FeatureMatrix read_feature_csv(const fs::path& path);

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

/// Per-image work shared by every ksize: gray rasters and Gabor responses.
struct ImageContext {
    ImageU8 rgb;
    ImageU8 gray_u8;
    ImageF gray;
    std::vector<ImageF> gabor;
};

ImageContext prepare_image(ImageU8 rgb, const PipelineConfig& config, Exec exec);

/// Seconds spent per family, accumulated.
using FamilyTimings = std::map<Family, double>;

/// All enabled families for one (image, ksize), columns ordered color,
/// shape, texture.
FeatureBlock extract_image_features(const ImageContext& ctx, const RegionGrid& grid, const PipelineConfig& config,
                                    Exec exec, FamilyTimings* timings = nullptr);

std::vector<std::string> feature_schema(const PipelineConfig& config);

struct RunStatus {
    int exit_code = 0;  // 0 ok, 1 partial, 2 config error
    std::size_t succeeded = 0;
    std::size_t failed = 0;
    std::vector<std::string> messages;
};

/// Writes features/{id}_{k}.csv and run_manifest.json under output_dir.
RunStatus run_extract(const PipelineConfig& config);

/// Reads run_manifest.json and the feature CSVs (never image pixels), fits
/// one forest per (image, ksize) and writes importance.csv,
/// summary_ksize.json, summary_family.json and top_features.json.
RunStatus run_rank(const PipelineConfig& config);

/// Human-readable digest of a finished rank run.
std::string render_report(const fs::path& output_dir);

// ---------------------------------------------------------------------------
// Synthetic boards
// ---------------------------------------------------------------------------

using Rgb8 = std::array<std::uint8_t, 3>;

struct ComponentRect {
    int x0 = 0, y0 = 0, width = 0, height = 0;
    Rgb8 color{};
    bool striped = false;
};

struct SyntheticBoardSpec {
    int width = 200;
    int height = 200;
    Rgb8 substrate{34, 110, 60};
    int component_count = 6;
    int min_size = 16;
    int max_size = 44;
    std::vector<Rgb8> palette{{20, 20, 24}, {205, 190, 150}, {170, 170, 176}, {130, 75, 40}, {235, 235, 230}};
    bool striped = false;
    double noise_sigma = 2.0;
    int gap = 2;
    std::uint64_t seed = 1;
    int max_attempts = 2000;
};

struct SyntheticBoard {
    ImageU8 image;
    SemanticMask mask;
    std::vector<ComponentRect> components;
};

/// Deterministic board and pixel-exact mask. Throws PlacementFailure when
/// the components cannot be placed within the attempt budget.
SyntheticBoard synth_board(const SyntheticBoardSpec& spec);

/// Writes `count` boards (seeds spec.seed, spec.seed+1, ...) as PNG pairs
/// plus dataset.json into `dir`; returns the manifest path.
fs::path synth_dataset(const fs::path& dir, int count, const SyntheticBoardSpec& spec);

}  // namespace pcbfeat::pipeline
