#pragma once

#include <span>

#include "pcbfeat/raster.hpp"

namespace pcbfeat {

/// Dense 2-D filter kernel, odd extents, anchor at the centre.
struct Kernel2D {
    int width = 0;
    int height = 0;
    std::vector<double> taps;  // row-major

    double at(int x, int y) const { return taps[static_cast<std::size_t>(y) * width + x]; }
};

namespace kernels {

/// Straightforward correlation with reflect-101 borders, one pixel at a
/// time. Kept as the reference the optimized path is tested against.
ImageF correlate_reference(const ImageF& src, const Kernel2D& kernel);

/// Same result as correlate_reference: pads once, then runs rows in
/// parallel with a branch-free inner loop. Accumulation order per pixel is
/// identical, so outputs match bit for bit.
ImageF correlate(const ImageF& src, const Kernel2D& kernel);

/// Separable correlation: rows with `row_taps`, then columns with
/// `col_taps`, both centred and reflect-101 bordered.
ImageF correlate_separable(const ImageF& src, std::span<const double> row_taps,
                           std::span<const double> col_taps);

}  // namespace kernels
}  // namespace pcbfeat
