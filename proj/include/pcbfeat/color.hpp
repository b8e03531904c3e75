#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pcbfeat/features.hpp"
#include "pcbfeat/imaging.hpp"
#include "pcbfeat/parallel.hpp"

namespace pcbfeat::color {

enum class ColorSpace { RGB, RGB_CIE, HSV, HLS, LAB, LUV, YCrCb, YDbDr, YPbPr, XYZ, YIQ, YUV, HED };

inline constexpr std::array<ColorSpace, 13> all_spaces = {
    ColorSpace::RGB,   ColorSpace::RGB_CIE, ColorSpace::HSV,   ColorSpace::HLS,  ColorSpace::LAB,
    ColorSpace::LUV,   ColorSpace::YCrCb,   ColorSpace::YDbDr, ColorSpace::YPbPr, ColorSpace::XYZ,
    ColorSpace::YIQ,   ColorSpace::YUV,     ColorSpace::HED};

std::string_view space_name(ColorSpace s);
/// Throws UnsupportedSpace for anything outside the 13 identifiers.
ColorSpace parse_space(std::string_view name);

/// Channel meaning per space, 0-based: e.g. HLS -> {H, L, S}, so HLS_2 is
/// saturation. Hue channels are in degrees [0, 360).
std::array<std::string_view, 3> channel_labels(ColorSpace s);

/// A colour triple. sRGB inputs are normalized to [0, 1].
using Color3 = std::array<double, 3>;

Color3 convert_pixel(ColorSpace space, const Color3& rgb);

Color3 rgb_to_hsv(const Color3& rgb);
Color3 hsv_to_rgb(const Color3& hsv);
Color3 rgb_to_hls(const Color3& rgb);
Color3 hls_to_rgb(const Color3& hls);
Color3 rgb_to_xyz(const Color3& rgb);
Color3 xyz_to_lab(const Color3& xyz);
Color3 xyz_to_luv(const Color3& xyz);

struct ChannelRange {
    float min = 0.0f;
    float max = 0.0f;
};

struct ConvertedImage {
    ColorSpace space = ColorSpace::RGB;
    ImageF pixels;  // 3 channels, native range of the space
    std::array<ChannelRange, 3> range{};
};

ConvertedImage convert_color_space(const ImageU8& rgb, ColorSpace space, Exec exec = Exec::parallel);

enum class ColorStat { mean, median };

/// Column-name suffix: "mean" or "med".
std::string_view stat_suffix(ColorStat s);

struct ColorFeatureSpec {
    std::vector<ColorSpace> spaces{all_spaces.begin(), all_spaces.end()};
    std::vector<ColorStat> stats{ColorStat::mean, ColorStat::median};
};

/// `SPACE_c_stat` for every (space, channel, stat) in spec order.
std::vector<std::string> feature_names(const ColorFeatureSpec& spec);

FeatureBlock extract_features(const ImageU8& rgb, const RegionGrid& grid,
                              const ColorFeatureSpec& spec, Exec exec = Exec::parallel);

/// Per-region stats over an already converted image; exposed so tests can
/// feed hand-built channel values.
void region_channel_stats(const ImageF& converted, const RegionAnchor& anchor, int ksize,
                          int channel, std::span<const ColorStat> stats, std::span<double> out);

}  // namespace pcbfeat::color
