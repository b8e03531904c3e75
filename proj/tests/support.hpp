#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "pcbfeat/raster.hpp"

namespace pcbfeat::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("pcbfeat_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline ImageU8 random_u8(int w, int h, int channels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ImageU8 img(w, h, channels);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

inline ImageF random_f(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ImageF img(w, h, 1);
    for (auto& v : img.data()) v = static_cast<float>(static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return img;
}

/// Squares of side `cell` alternating between 0.1 and 0.9, origin at (ox, oy).
inline ImageF checkerboard(int w, int h, int cell, int ox = 0, int oy = 0) {
    ImageF img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int cx = static_cast<int>(std::floor(static_cast<double>(x - ox) / cell));
            const int cy = static_cast<int>(std::floor(static_cast<double>(y - oy) / cell));
            img.at(x, y) = ((cx + cy) & 1) ? 0.9f : 0.1f;
        }
    return img;
}

/// base + amplitude * exp(-r^2 / (2 sigma^2)) centred at (cx, cy).
inline ImageF gaussian_spot(int w, int h, double cx, double cy, double sigma, double base, double amplitude) {
    ImageF img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            img.at(x, y) = static_cast<float>(base + amplitude * std::exp(-r2 / (2.0 * sigma * sigma)));
        }
    return img;
}

}  // namespace pcbfeat::test
