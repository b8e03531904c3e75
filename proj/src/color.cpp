#include "pcbfeat/color.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcbfeat/stats.hpp"

namespace pcbfeat::color {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Color3 mul(const Mat3& m, const Color3& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Mat3 inverse(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 r{};
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return r;
}

Mat3 transpose(const Mat3& m) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

// sRGB (D65) linear RGB -> XYZ.
constexpr Mat3 kXyzFromRgb = {{{0.412453, 0.357580, 0.180423},
                               {0.212671, 0.715160, 0.072169},
                               {0.019334, 0.119193, 0.950227}}};

// Reference white is the image of linear (1,1,1), so sRGB white lands on
// L=100, a=b=0 (and u=v=0) exactly.
const Color3 kWhite = mul(kXyzFromRgb, {1.0, 1.0, 1.0});

// CIE 1931 RGB primaries, applied to the gamma-encoded values through the
// sRGB matrix (no linearization step).
const Mat3 kRgbCieFromXyz = [] {
    Mat3 m = {{{0.49, 0.31, 0.20}, {0.17697, 0.81240, 0.01063}, {0.00, 0.01, 0.99}}};
    for (auto& row : m)
        for (auto& v : row) v /= 0.17697;
    return inverse(m);
}();

// BT.601 luma family.
constexpr Mat3 kYuvFromRgb = {{{0.299, 0.587, 0.114},
                               {-0.14714119, -0.28886916, 0.43601035},
                               {0.61497538, -0.51496512, -0.10001026}}};
constexpr Mat3 kYiqFromRgb = {{{0.299, 0.587, 0.114},
                               {0.59590059, -0.27455667, -0.32134392},
                               {0.21153661, -0.52273617, 0.31119955}}};
constexpr Mat3 kYpbprFromRgb = {{{0.299, 0.587, 0.114},
                                 {-0.168736, -0.331264, 0.5},
                                 {0.5, -0.418688, -0.081312}}};
constexpr Mat3 kYdbdrFromRgb = {{{0.299, 0.587, 0.114},
                                 {-0.45, -0.883, 1.333},
                                 {-1.333, 1.116, 0.217}}};

// Ruifrok-Johnston stain vectors (rows: haematoxylin, eosin, DAB) in optical
// density space. Optical density is projected onto the stains with the
// inverse, applied to row vectors.
const Mat3 kHedFromRgbT = [] {
    Mat3 rgb_from_hed = {{{0.65, 0.70, 0.29}, {0.07, 0.99, 0.11}, {0.27, 0.57, 0.78}}};
    return transpose(inverse(rgb_from_hed));
}();

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

double wrap_hue(double h) {
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    return h >= 360.0 ? 0.0 : h;
}

// Hue in degrees from chroma components; returns 0 for achromatic input.
double hue_of(const Color3& rgb, double mx, double chroma) {
    if (chroma <= 0.0) return 0.0;
    const auto [r, g, b] = rgb;
    double h;
    if (mx == r) {
        h = 60.0 * (g - b) / chroma;
    } else if (mx == g) {
        h = 60.0 * ((b - r) / chroma + 2.0);
    } else {
        h = 60.0 * ((r - g) / chroma + 4.0);
    }
    return wrap_hue(h);
}

Color3 from_hue_chroma(double h, double chroma, double m) {
    const double hp = wrap_hue(h) / 60.0;
    const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    Color3 c{};
    switch (static_cast<int>(hp)) {
        case 0: c = {chroma, x, 0.0}; break;
        case 1: c = {x, chroma, 0.0}; break;
        case 2: c = {0.0, chroma, x}; break;
        case 3: c = {0.0, x, chroma}; break;
        case 4: c = {x, 0.0, chroma}; break;
        default: c = {chroma, 0.0, x}; break;
    }
    return {c[0] + m, c[1] + m, c[2] + m};
}

}  // namespace

std::string_view space_name(ColorSpace s) {
    switch (s) {
        case ColorSpace::RGB: return "RGB";
        case ColorSpace::RGB_CIE: return "RGB_CIE";
        case ColorSpace::HSV: return "HSV";
        case ColorSpace::HLS: return "HLS";
        case ColorSpace::LAB: return "LAB";
        case ColorSpace::LUV: return "LUV";
        case ColorSpace::YCrCb: return "YCrCb";
        case ColorSpace::YDbDr: return "YDbDr";
        case ColorSpace::YPbPr: return "YPbPr";
        case ColorSpace::XYZ: return "XYZ";
        case ColorSpace::YIQ: return "YIQ";
        case ColorSpace::YUV: return "YUV";
        case ColorSpace::HED: return "HED";
    }
    throw UnsupportedSpace("unknown colour space id");
}

ColorSpace parse_space(std::string_view name) {
    for (auto s : all_spaces) {
        if (space_name(s) == name) return s;
    }
    throw UnsupportedSpace("unsupported colour space '" + std::string(name) + "'");
}

std::array<std::string_view, 3> channel_labels(ColorSpace s) {
    switch (s) {
        case ColorSpace::RGB: return {"R", "G", "B"};
        case ColorSpace::RGB_CIE: return {"R", "G", "B"};
        case ColorSpace::HSV: return {"H", "S", "V"};
        case ColorSpace::HLS: return {"H", "L", "S"};
        case ColorSpace::LAB: return {"L", "a", "b"};
        case ColorSpace::LUV: return {"L", "u", "v"};
        case ColorSpace::YCrCb: return {"Y", "Cr", "Cb"};
        case ColorSpace::YDbDr: return {"Y", "Db", "Dr"};
        case ColorSpace::YPbPr: return {"Y", "Pb", "Pr"};
        case ColorSpace::XYZ: return {"X", "Y", "Z"};
        case ColorSpace::YIQ: return {"Y", "I", "Q"};
        case ColorSpace::YUV: return {"Y", "U", "V"};
        case ColorSpace::HED: return {"H", "E", "D"};
    }
    throw UnsupportedSpace("unknown colour space id");
}

Color3 rgb_to_hsv(const Color3& rgb) {
    const double mx = std::max({rgb[0], rgb[1], rgb[2]});
    const double mn = std::min({rgb[0], rgb[1], rgb[2]});
    const double chroma = mx - mn;
    return {hue_of(rgb, mx, chroma), mx > 0.0 ? chroma / mx : 0.0, mx};
}

Color3 hsv_to_rgb(const Color3& hsv) {
    const double chroma = hsv[2] * hsv[1];
    return from_hue_chroma(hsv[0], chroma, hsv[2] - chroma);
}

Color3 rgb_to_hls(const Color3& rgb) {
    const double mx = std::max({rgb[0], rgb[1], rgb[2]});
    const double mn = std::min({rgb[0], rgb[1], rgb[2]});
    const double chroma = mx - mn;
    const double l = 0.5 * (mx + mn);
    const double denom = 1.0 - std::fabs(2.0 * l - 1.0);
    return {hue_of(rgb, mx, chroma), l, chroma > 0.0 && denom > 0.0 ? chroma / denom : 0.0};
}

Color3 hls_to_rgb(const Color3& hls) {
    const double chroma = (1.0 - std::fabs(2.0 * hls[1] - 1.0)) * hls[2];
    return from_hue_chroma(hls[0], chroma, hls[1] - 0.5 * chroma);
}

Color3 rgb_to_xyz(const Color3& rgb) {
    return mul(kXyzFromRgb, {srgb_to_linear(rgb[0]), srgb_to_linear(rgb[1]), srgb_to_linear(rgb[2])});
}

Color3 xyz_to_lab(const Color3& xyz) {
    const double fx = lab_f(xyz[0] / kWhite[0]);
    const double fy = lab_f(xyz[1] / kWhite[1]);
    const double fz = lab_f(xyz[2] / kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Color3 xyz_to_luv(const Color3& xyz) {
    const double l = 116.0 * lab_f(xyz[1] / kWhite[1]) - 16.0;
    const double denom = xyz[0] + 15.0 * xyz[1] + 3.0 * xyz[2];
    if (denom <= 0.0) return {l, 0.0, 0.0};
    const double wd = kWhite[0] + 15.0 * kWhite[1] + 3.0 * kWhite[2];
    const double u = 4.0 * xyz[0] / denom - 4.0 * kWhite[0] / wd;
    const double v = 9.0 * xyz[1] / denom - 9.0 * kWhite[1] / wd;
    return {l, 13.0 * l * u, 13.0 * l * v};
}

Color3 convert_pixel(ColorSpace space, const Color3& rgb) {
    switch (space) {
        case ColorSpace::RGB: return rgb;
        case ColorSpace::RGB_CIE: return mul(kRgbCieFromXyz, mul(kXyzFromRgb, rgb));
        case ColorSpace::HSV: return rgb_to_hsv(rgb);
        case ColorSpace::HLS: return rgb_to_hls(rgb);
        case ColorSpace::LAB: return xyz_to_lab(rgb_to_xyz(rgb));
        case ColorSpace::LUV: return xyz_to_luv(rgb_to_xyz(rgb));
        case ColorSpace::YCrCb: {
            const double y = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
            return {y, (rgb[0] - y) * 0.713 + 0.5, (rgb[2] - y) * 0.564 + 0.5};
        }
        case ColorSpace::YDbDr: return mul(kYdbdrFromRgb, rgb);
        case ColorSpace::YPbPr: return mul(kYpbprFromRgb, rgb);
        case ColorSpace::XYZ: return rgb_to_xyz(rgb);
        case ColorSpace::YIQ: return mul(kYiqFromRgb, rgb);
        case ColorSpace::YUV: return mul(kYuvFromRgb, rgb);
        case ColorSpace::HED: {
            constexpr double floor_v = 1e-6;
            const double log_adjust = std::log(floor_v);
            Color3 od{};
            for (int i = 0; i < 3; ++i) od[i] = std::log(std::max(rgb[i], floor_v)) / log_adjust;
            Color3 hed = mul(kHedFromRgbT, od);
            for (auto& v : hed) v = std::max(v, 0.0);
            return hed;
        }
    }
    throw UnsupportedSpace("unknown colour space id");
}

ConvertedImage convert_color_space(const ImageU8& rgb, ColorSpace space, Exec exec) {
    if (rgb.channels() != 3) throw FormatError("colour conversion expects 3 channels");
    // Validates the identifier before any work.
    (void)space_name(space);
    ConvertedImage out{space, ImageF(rgb.width(), rgb.height(), 3), {}};
    parallel_for(exec, rgb.height(), [&](std::int64_t yy) {
        const int y = static_cast<int>(yy);
        auto src = rgb.row(y);
        auto dst = out.pixels.row(y);
        for (int x = 0; x < rgb.width(); ++x) {
            const Color3 c = convert_pixel(
                space, {src[3 * x] / 255.0, src[3 * x + 1] / 255.0, src[3 * x + 2] / 255.0});
            for (int ch = 0; ch < 3; ++ch) dst[3 * x + ch] = static_cast<float>(c[ch]);
        }
    });
    for (int ch = 0; ch < 3; ++ch) {
        float lo = std::numeric_limits<float>::infinity();
        float hi = -lo;
        const auto data = out.pixels.data();
        for (std::size_t i = ch; i < data.size(); i += 3) {
            lo = std::min(lo, data[i]);
            hi = std::max(hi, data[i]);
        }
        out.range[ch] = data.empty() ? ChannelRange{} : ChannelRange{lo, hi};
    }
    return out;
}

std::string_view stat_suffix(ColorStat s) { return s == ColorStat::mean ? "mean" : "med"; }

std::vector<std::string> feature_names(const ColorFeatureSpec& spec) {
    std::vector<std::string> names;
    for (auto space : spec.spaces) {
        for (int ch = 0; ch < 3; ++ch) {
            for (auto stat : spec.stats) {
                names.push_back(std::string(space_name(space)) + "_" + std::to_string(ch) + "_" +
                                std::string(stat_suffix(stat)));
            }
        }
    }
    return names;
}

void region_channel_stats(const ImageF& converted, const RegionAnchor& anchor, int ksize,
                          int channel, std::span<const ColorStat> stats, std::span<double> out) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(ksize) * ksize);
    for (int y = anchor.y0; y < anchor.y0 + ksize; ++y) {
        for (int x = anchor.x0; x < anchor.x0 + ksize; ++x) values.push_back(converted.at(x, y, channel));
    }
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out[i] = stats[i] == ColorStat::mean ? stats::mean(values) : stats::lower_median(values);
    }
}

FeatureBlock extract_features(const ImageU8& rgb, const RegionGrid& grid,
                              const ColorFeatureSpec& spec, Exec exec) {
    if (spec.spaces.empty() || spec.stats.empty()) {
        throw InvalidParams("colour feature spec needs at least one space and one stat");
    }
    if (grid.cols * grid.ksize > rgb.width() || grid.rows * grid.ksize > rgb.height()) {
        throw DimensionMismatch("region grid exceeds image bounds");
    }
    FeatureBlock block(feature_names(spec), grid.size());
    const std::size_t per_space = 3 * spec.stats.size();
    for (std::size_t s = 0; s < spec.spaces.size(); ++s) {
        const ConvertedImage conv = convert_color_space(rgb, spec.spaces[s], exec);
        parallel_for(exec, static_cast<std::int64_t>(grid.size()), [&](std::int64_t r) {
            auto row = block.row(static_cast<std::size_t>(r));
            for (int ch = 0; ch < 3; ++ch) {
                region_channel_stats(conv.pixels, grid.regions[r], grid.ksize, ch, spec.stats,
                                     row.subspan(s * per_space + ch * spec.stats.size(), spec.stats.size()));
            }
        });
    }
    return block;
}

}  // namespace pcbfeat::color
