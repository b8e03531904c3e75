#include "pcbfeat/imaging.hpp"

#include <opencv2/imgcodecs.hpp>

#include <string>

namespace pcbfeat {
namespace {

int depth_bits(int cv_depth) {
    switch (cv_depth) {
        case CV_8U:
        case CV_8S: return 8;
        case CV_16U:
        case CV_16S:
        case CV_16F: return 16;
        case CV_32S:
        case CV_32F: return 32;
        default: return 64;
    }
}

cv::Mat read_raw(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw IoError("cannot open " + path.string());
    }
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (m.empty()) {
        throw IoError("cannot decode " + path.string());
    }
    if (m.depth() != CV_8U) {
        throw FormatError("depth " + std::to_string(depth_bits(m.depth())) + ", expected 8");
    }
    return m;
}

}  // namespace

std::size_t SemanticMask::count() const {
    std::size_t n = 0;
    for (auto v : data) n += v;
    return n;
}

SemanticMask SemanticMask::from_raster(const ImageU8& raster) {
    if (raster.channels() != 1) {
        throw FormatError("mask channels " + std::to_string(raster.channels()) + ", expected 1");
    }
    SemanticMask m{raster.width(), raster.height(), {}};
    m.data.reserve(raster.size());
    for (auto v : raster.data()) m.data.push_back(v != 0 ? 1 : 0);
    return m;
}

ImageU8 load_image(const std::filesystem::path& path) {
    cv::Mat m = read_raw(path);
    if (m.channels() != 3) {
        throw FormatError("channels " + std::to_string(m.channels()) + ", expected 3");
    }
    ImageU8 out(m.cols, m.rows, 3);
    for (int y = 0; y < m.rows; ++y) {
        const auto* src = m.ptr<std::uint8_t>(y);
        auto dst = out.row(y);
        for (int x = 0; x < m.cols; ++x) {
            // OpenCV decodes to BGR.
            dst[3 * x + 0] = src[3 * x + 2];
            dst[3 * x + 1] = src[3 * x + 1];
            dst[3 * x + 2] = src[3 * x + 0];
        }
    }
    return out;
}

SemanticMask load_mask(const std::filesystem::path& path) {
    cv::Mat m = read_raw(path);
    if (m.channels() != 1) {
        throw FormatError("channels " + std::to_string(m.channels()) + ", expected 1");
    }
    SemanticMask mask{m.cols, m.rows, {}};
    mask.data.reserve(static_cast<std::size_t>(m.cols) * m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* src = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) mask.data.push_back(src[x] != 0 ? 1 : 0);
    }
    return mask;
}

void save_png(const std::filesystem::path& path, const ImageU8& image) {
    const int type = image.channels() == 3 ? CV_8UC3 : CV_8UC1;
    cv::Mat m(image.height(), image.width(), type);
    for (int y = 0; y < image.height(); ++y) {
        auto src = image.row(y);
        auto* dst = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < image.width(); ++x) {
            if (image.channels() == 3) {
                dst[3 * x + 0] = src[3 * x + 2];
                dst[3 * x + 1] = src[3 * x + 1];
                dst[3 * x + 2] = src[3 * x + 0];
            } else {
                dst[x] = src[x];
            }
        }
    }
    if (!cv::imwrite(path.string(), m)) {
        throw IoError("cannot write " + path.string());
    }
}

void save_mask_png(const std::filesystem::path& path, const SemanticMask& mask) {
    ImageU8 raster(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i) raster.data()[i] = mask.data[i] ? 255 : 0;
    save_png(path, raster);
}

RegionGrid build_region_grid(int width, int height, int ksize) {
    if (ksize < 1 || ksize > width || ksize > height) {
        throw InvalidKsize("ksize " + std::to_string(ksize) + " invalid for " +
                           std::to_string(width) + "x" + std::to_string(height) + " image");
    }
    RegionGrid grid{ksize, height / ksize, width / ksize, {}};
    grid.regions.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) grid.regions.push_back({c * ksize, r * ksize});
    }
    return grid;
}

int decile_for_count(std::size_t count, std::size_t area) {
    // floor(10 * count / area + 1/2) == floor((20 * count + area) / (2 * area))
    return static_cast<int>((20 * count + area) / (2 * area));
}

std::vector<RegionLabel> label_regions(const RegionGrid& grid, const SemanticMask& mask) {
    if (mask.width < grid.cols * grid.ksize || mask.height < grid.rows * grid.ksize) {
        throw DimensionMismatch("mask " + std::to_string(mask.width) + "x" +
                                std::to_string(mask.height) + " smaller than grid extent");
    }
    const std::size_t k = static_cast<std::size_t>(grid.ksize);
    const std::size_t area = k * k;
    std::vector<RegionLabel> labels;
    labels.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto [x0, y0] = grid.regions[i];
        std::size_t count = 0;
        for (int y = y0; y < y0 + grid.ksize; ++y) {
            for (int x = x0; x < x0 + grid.ksize; ++x) count += mask.at(x, y);
        }
        labels.push_back({i, decile_for_count(count, area),
                          static_cast<double>(count) / static_cast<double>(area)});
    }
    return labels;
}

ImageU8 to_gray_u8(const ImageU8& rgb) {
    ImageU8 out(rgb.width(), rgb.height(), 1);
    auto src = rgb.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const int v = 299 * src[3 * i] + 587 * src[3 * i + 1] + 114 * src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>((v + 500) / 1000);
    }
    return out;
}

ImageF to_gray_f32(const ImageU8& rgb) {
    ImageF out(rgb.width(), rgb.height(), 1);
    auto src = rgb.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<float>((0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                                     0.114 * src[3 * i + 2]) / 255.0);
    }
    return out;
}

}  // namespace pcbfeat
