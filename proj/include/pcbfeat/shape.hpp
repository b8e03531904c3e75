#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcbfeat/features.hpp"
#include "pcbfeat/imaging.hpp"
#include "pcbfeat/parallel.hpp"

namespace pcbfeat::shape {

// ---------------------------------------------------------------------------
// Corners
// ---------------------------------------------------------------------------

enum class CornerScore { shi_tomasi, harris };

struct CornerParams {
    int max_corners = 25;          // <= 0 means unlimited
    double quality_level = 0.01;   // fraction of the strongest response
    double min_distance = 5.0;
    int block_size = 3;
    double harris_k = 0.04;
    CornerScore score = CornerScore::shi_tomasi;
    int refine_window = 3;         // half-size of the refinement window
    int refine_zero_zone = -1;     // half-size of the ignored centre, -1 = none
    int refine_max_iter = 40;
    double refine_epsilon = 0.001;

    /// max_corners = k, min_distance = max(1, k/5); everything else default.
    static CornerParams for_ksize(int ksize);
    void validate() const;
};

struct Corner {
    double x = 0.0;
    double y = 0.0;
    double response = 0.0;
};
using CornerSet = std::vector<Corner>;

/// Block-summed Sobel products: M = [[xx, xy], [xy, yy]] per pixel.
struct StructureTensor {
    ImageF xx;
    ImageF xy;
    ImageF yy;
};

enum class Border { reflect101, replicate };

/// 3x3 Sobel derivatives.
std::pair<ImageF, ImageF> sobel(const ImageF& gray, Border border = Border::reflect101);

StructureTensor structure_tensor(const ImageF& gray, int block_size);

/// Eigenvalues of [[a, b], [b, c]], larger first.
std::pair<double, double> symmetric_eigenvalues(double a, double b, double c);

/// min(l1, l2) for Shi-Tomasi or det - k * trace^2 for Harris.
ImageF structure_tensor_response(const ImageF& gray, int block_size,
                                 CornerScore score = CornerScore::shi_tomasi,
                                 double harris_k = 0.04);

/// Iterative gradient-orthogonality refinement of one corner estimate.
Corner refine_corner(const ImageF& gray, Corner initial, const CornerParams& params);

/// Detection (threshold, 3x3 local maxima, greedy min-distance suppression,
/// cap) followed by subpixel refinement. Scores are sorted descending.
CornerSet shi_tomasi_corners(const ImageF& gray, const CornerParams& params);

// ---------------------------------------------------------------------------
// Determinant-of-Hessian blobs
// ---------------------------------------------------------------------------

struct BlobParams {
    double min_sigma = 1.0;
    double max_sigma = 12.5;
    int num_sigma = 5;
    double threshold = 0.01;
    double overlap = 0.5;
    bool log_scale = false;

    /// min_sigma = 1, max_sigma = k/2, the rest default.
    static BlobParams for_ksize(int ksize);
    void validate() const;
    std::vector<double> sigmas() const;
};

struct Blob {
    double x = 0.0;
    double y = 0.0;
    double sigma = 0.0;
    double response = 0.0;
};

/// sigma^4 * det(Hessian) from sampled Gaussian derivatives. Bright and dark
/// blobs both give positive maxima.
ImageF hessian_determinant(const ImageF& gray, double sigma);

/// Area of the smaller blob covered by the other, blob radius = sigma * sqrt(2).
double blob_overlap(const Blob& a, const Blob& b);

std::vector<Blob> doh_blobs(const ImageF& gray, const BlobParams& params);

// ---------------------------------------------------------------------------
// Canny edges and external contours
// ---------------------------------------------------------------------------

struct EdgeParams {
    int bilateral_diameter = 7;
    double bilateral_sigma_color = 50.0;
    double bilateral_sigma_space = 50.0;
    double threshold_ratio = 0.25;
    bool l2_gradient = false;

    /// (mean - ratio * mean, mean + ratio * mean) clamped to [0, 255].
    std::pair<double, double> canny_thresholds(double gray_mean_255) const;
};

/// Binary 0/1 map with the raster's shape.
using EdgeMap = Raster<std::uint8_t>;

/// Circular window of radius diameter/2, reflect-101 borders, unrounded.
ImageF bilateral_filter(const ImageF& gray255, int diameter, double sigma_color, double sigma_space);

/// Expects integer-valued input on the 0..255 scale. Replicated borders for
/// the gradient, fixed-point 22.5 degree sector test, 8-neighbour hysteresis.
EdgeMap canny(const ImageF& gray255, double low, double high, bool l2_gradient);

struct PixelPoint {
    int x = 0;
    int y = 0;
    bool operator==(const PixelPoint&) const = default;
};

struct Contour {
    std::vector<PixelPoint> points;  // full chain, no approximation
    double area = 0.0;               // shoelace over the chain
    double perimeter = 0.0;          // 1 per axis step, sqrt(2) per diagonal
};

/// Outer boundaries of 8-connected foreground components that are not
/// enclosed by another component (holes and their contents are skipped).
std::vector<Contour> external_contours(const EdgeMap& binary);

struct EdgeStats {
    double contour_count = 0.0;
    double max_contour_area = 0.0;
    double total_contour_perimeter = 0.0;
    double edge_pixel_fraction = 0.0;
};

/// 8-bit quantize -> bilateral (rounded back to 8 bits) -> Canny with
/// thresholds from the 8-bit mean -> external contours. `gray` is in [0, 1].
EdgeStats canny_contour_features(const ImageF& gray, const EdgeParams& params);

// ---------------------------------------------------------------------------
// Per-region slice
// ---------------------------------------------------------------------------

inline constexpr std::size_t kFeatureCount = 8;

std::vector<std::string> feature_names();

/// Runs the three detectors on one region in isolation.
std::array<double, kFeatureCount> region_features(const ImageF& gray_block, int ksize);

FeatureBlock extract_features(const ImageF& gray, const RegionGrid& grid, Exec exec = Exec::parallel);

}  // namespace pcbfeat::shape
