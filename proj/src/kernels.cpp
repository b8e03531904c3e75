#include "pcbfeat/kernels.hpp"

#include <omp.h>

#include "pcbfeat/parallel.hpp"

namespace pcbfeat {

int set_worker_count(int workers) {
    const int previous = omp_get_max_threads();
    if (workers > 0) omp_set_num_threads(workers);
    return previous;
}

int worker_count() { return omp_get_max_threads(); }

namespace kernels {
namespace {

void check_kernel(const ImageF& src, const Kernel2D& k) {
    if (src.channels() != 1) throw InvalidParams("correlation expects a single-channel image");
    if (k.width % 2 == 0 || k.height % 2 == 0 ||
        k.taps.size() != static_cast<std::size_t>(k.width) * k.height) {
        throw InvalidParams("kernel extents must be odd and match the tap count");
    }
}

}  // namespace

ImageF correlate_reference(const ImageF& src, const Kernel2D& kernel) {
    check_kernel(src, kernel);
    const int rx = kernel.width / 2;
    const int ry = kernel.height / 2;
    ImageF out(src.width(), src.height(), 1);
    for (int y = 0; y < src.height(); ++y) {
        for (int x = 0; x < src.width(); ++x) {
            double acc = 0.0;
            for (int j = 0; j < kernel.height; ++j) {
                const int sy = reflect101(y + j - ry, src.height());
                for (int i = 0; i < kernel.width; ++i) {
                    const int sx = reflect101(x + i - rx, src.width());
                    acc += kernel.at(i, j) * src.at(sx, sy);
                }
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

ImageF correlate(const ImageF& src, const Kernel2D& kernel) {
    check_kernel(src, kernel);
    const int rx = kernel.width / 2;
    const int ry = kernel.height / 2;
    const int pw = src.width() + 2 * rx;
    const int ph = src.height() + 2 * ry;
    std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = reflect101(y - ry, src.height());
        for (int x = 0; x < pw; ++x) {
            padded[static_cast<std::size_t>(y) * pw + x] = src.at(reflect101(x - rx, src.width()), sy);
        }
    }
    ImageF out(src.width(), src.height(), 1);
    const double* taps = kernel.taps.data();
    parallel_for(Exec::parallel, src.height(), [&](std::int64_t y) {
        auto dst = out.row(static_cast<int>(y));
        for (int x = 0; x < src.width(); ++x) {
            double acc = 0.0;
            for (int j = 0; j < kernel.height; ++j) {
                const double* p = padded.data() + static_cast<std::size_t>(y + j) * pw + x;
                const double* t = taps + static_cast<std::size_t>(j) * kernel.width;
                for (int i = 0; i < kernel.width; ++i) acc += t[i] * p[i];
            }
            dst[x] = static_cast<float>(acc);
        }
    });
    return out;
}

ImageF correlate_separable(const ImageF& src, std::span<const double> row_taps,
                           std::span<const double> col_taps) {
    if (src.channels() != 1 || row_taps.size() % 2 == 0 || col_taps.size() % 2 == 0) {
        throw InvalidParams("separable correlation expects 1 channel and odd taps");
    }
    const int w = src.width();
    const int h = src.height();
    const int rx = static_cast<int>(row_taps.size() / 2);
    const int ry = static_cast<int>(col_taps.size() / 2);
    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < static_cast<int>(row_taps.size()); ++i) {
                acc += row_taps[i] * src.at(reflect101(x + i - rx, w), y);
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    ImageF out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = 0; j < static_cast<int>(col_taps.size()); ++j) {
                acc += col_taps[j] * tmp[static_cast<std::size_t>(reflect101(y + j - ry, h)) * w + x];
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

}  // namespace kernels
}  // namespace pcbfeat
