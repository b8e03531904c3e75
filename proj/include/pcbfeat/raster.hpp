#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcbfeat/error.hpp"

namespace pcbfeat {

/// Row-major interleaved pixel grid with top-left origin. Coordinates are
/// (x, y) = (column, row) everywhere in this library.
template <typename T>
class Raster {
public:
    using value_type = T;

    Raster() = default;
    Raster(int width, int height, int channels, T fill = T{})
        : width_(width), height_(height), channels_(channels),
          data_(checked_size(width, height, channels), fill) {}
    Raster(int width, int height, int channels, std::vector<T> data)
        : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
        if (data_.size() != checked_size(width, height, channels)) {
            throw DimensionMismatch("raster buffer has " + std::to_string(data_.size()) +
                                    " values, expected " +
                                    std::to_string(checked_size(width, height, channels)));
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

    std::span<T> row(int y) {
        return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
                static_cast<std::size_t>(width_) * channels_};
    }
    std::span<const T> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
                static_cast<std::size_t>(width_) * channels_};
    }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }
    const std::vector<T>& buffer() const { return data_; }

    /// Copies the w x h window anchored at (x0, y0).
    Raster crop(int x0, int y0, int w, int h) const {
        if (x0 < 0 || y0 < 0 || w < 0 || h < 0 || x0 + w > width_ || y0 + h > height_) {
            throw DimensionMismatch("crop window exceeds raster bounds");
        }
        Raster out(w, h, channels_);
        for (int y = 0; y < h; ++y) {
            auto src = row(y0 + y).subspan(static_cast<std::size_t>(x0) * channels_,
                                           static_cast<std::size_t>(w) * channels_);
            std::copy(src.begin(), src.end(), out.row(y).begin());
        }
        return out;
    }

    bool operator==(const Raster&) const = default;

private:
    static std::size_t checked_size(int w, int h, int c) {
        if (w < 0 || h < 0 || (c != 1 && c != 3)) {
            throw DimensionMismatch("invalid raster shape " + std::to_string(w) + "x" +
                                    std::to_string(h) + "x" + std::to_string(c));
        }
        return static_cast<std::size_t>(w) * h * c;
    }
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<T> data_;
};

using ImageU8 = Raster<std::uint8_t>;
using ImageF = Raster<float>;

/// Reflect-101 border index (…c b | a b c … | b a…), valid for any offset.
inline int reflect101(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace pcbfeat
