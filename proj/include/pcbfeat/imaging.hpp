#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pcbfeat/raster.hpp"

namespace pcbfeat {

/// Per-pixel binary annotation: 1 = component, 0 = background.
struct SemanticMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const;
    static SemanticMask from_raster(const ImageU8& raster);
};

struct RegionAnchor {
    int x0 = 0;
    int y0 = 0;
    bool operator==(const RegionAnchor&) const = default;
};

/// Non-overlapping k x k tiles, row-major from (0,0). Partial border strips
/// are dropped.
struct RegionGrid {
    int ksize = 0;
    int rows = 0;
    int cols = 0;
    std::vector<RegionAnchor> regions;

    std::size_t size() const { return regions.size(); }
};

struct RegionLabel {
    std::size_t region_index = 0;
    int decile = 0;
    double fraction = 0.0;
};

ImageU8 load_image(const std::filesystem::path& path);
SemanticMask load_mask(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const ImageU8& image);
void save_mask_png(const std::filesystem::path& path, const SemanticMask& mask);

RegionGrid build_region_grid(int width, int height, int ksize);

/// round(10 * count / area) with ties rounded up, computed in integers.
int decile_for_count(std::size_t count, std::size_t area);

std::vector<RegionLabel> label_regions(const RegionGrid& grid, const SemanticMask& mask);

/// BT.601 luma. The u8 variant rounds to nearest; the float variant is in [0,1].
ImageU8 to_gray_u8(const ImageU8& rgb);
ImageF to_gray_f32(const ImageU8& rgb);

}  // namespace pcbfeat
