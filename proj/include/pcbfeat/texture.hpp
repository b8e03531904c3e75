#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcbfeat/features.hpp"
#include "pcbfeat/imaging.hpp"
#include "pcbfeat/kernels.hpp"
#include "pcbfeat/parallel.hpp"

namespace pcbfeat::texture {

// ---------------------------------------------------------------------------
// Gabor
// ---------------------------------------------------------------------------

struct GaborParams {
    double lambda = 14.0;  // wavelength, pixels
    double psi = 0.0;      // phase, degrees
    double sigma = 5.0;    // envelope std, pixels
    double gamma = 1.0;    // spatial aspect ratio
    std::vector<double> thetas{0, 30, 60, 90, 120, 150};  // degrees
    int kernel_extent = 0;  // 0 -> 2 * ceil(3 * sigma) + 1

    int extent() const;
    void validate() const;
};

/// Real Gabor kernel. theta is measured from the +x axis toward +y (image
/// rows grow downward); theta = 0 modulates along x, i.e. it responds to
/// vertical stripes.
Kernel2D gabor_kernel(const GaborParams& params, double theta_deg);

/// Full-image reflect-padded filter responses, one per orientation.
std::vector<ImageF> gabor_responses(const ImageF& gray, const GaborParams& params,
                                    Exec exec = Exec::parallel);

std::vector<std::string> gabor_feature_names(const GaborParams& params);

/// Mean and variance of |response| per region and orientation.
FeatureBlock gabor_features(const ImageF& gray, const GaborParams& params, const RegionGrid& grid,
                            Exec exec = Exec::parallel);

/// Same, from responses computed earlier (reused across ksizes).
FeatureBlock gabor_features(std::span<const ImageF> responses, const GaborParams& params, const RegionGrid& grid,
                            Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Gray-level co-occurrence
// ---------------------------------------------------------------------------

struct GlcmSpec {
    std::vector<int> distances{1};
    std::vector<int> angles{0, 45, 90, 135};
    int levels = 16;
    bool symmetric = true;
    bool normalize = true;

    void validate() const;
};

struct PixelOffset {
    int dx = 0;
    int dy = 0;
};

/// 0 -> (d, 0), 45 -> (d, d), 90 -> (0, d), 135 -> (-d, d): dy = round(d sin a)
/// with rows growing downward, the scikit-image graycomatrix convention.
PixelOffset angle_offset(int angle_deg, int distance);

struct GlcmMatrix {
    int levels = 0;
    int distance = 1;
    int angle = 0;
    std::vector<double> p;  // row-major levels x levels, indexed [reference][neighbour]

    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * levels + j]; }
};

/// Equal-width binning of [0, 255] into `levels` bins.
ImageU8 quantize(const ImageU8& gray, int levels);

/// Co-occurrences on an already quantized block. Throws DegenerateRegion
/// when the offset leaves no pixel pair inside the block.
GlcmMatrix glcm_from_levels(const ImageU8& level_block, int levels, PixelOffset offset, bool symmetric,
                            bool normalize);

/// Quantizes then computes one matrix per (distance, angle), distances outer.
std::vector<GlcmMatrix> glcm(const ImageU8& gray_block, const GlcmSpec& spec);

struct GlcmProperties {
    double asm_ = 0.0;
    double contrast = 0.0;
    double dissimilarity = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double homogeneity = 0.0;
};

GlcmProperties glcm_properties(const GlcmMatrix& m);

std::vector<std::string> glcm_feature_names(const GlcmSpec& spec);

/// Six properties per (distance, angle). Degenerate offsets yield zeros and
/// `degenerate` is set.
void glcm_region_features(const ImageU8& gray_block, const GlcmSpec& spec, std::span<double> out,
                          bool* degenerate = nullptr);

// ---------------------------------------------------------------------------
// Rotation-invariant uniform LBP
// ---------------------------------------------------------------------------

inline constexpr int kLbpBins = 10;

struct LbpCode {
    std::uint8_t value = 0;          // raw pattern
    std::uint8_t rotated_value = 0;  // min over the 8 circular rotations
    bool uniform = true;             // <= 2 circular 0/1 transitions
    int bin = 0;                     // set-bit count if uniform, else 9
};

int circular_transitions(std::uint8_t pattern);
std::uint8_t min_rotation(std::uint8_t pattern);
LbpCode classify_pattern(std::uint8_t pattern);

/// `block` is a row-major 3x3 neighbourhood. Neighbours are read clockwise
/// from the top-left; neighbour i sets bit i when strictly brighter than
/// the centre.
LbpCode rlbp_ulbp_code(std::span<const std::uint8_t, 9> block);

/// Normalized 10-bin histogram over all interior pixels.
std::array<double, kLbpBins> lbp_histogram(const ImageU8& gray_block);

std::vector<std::string> lbp_feature_names();

/// 10 bin frequencies followed by the histogram entropy.
std::array<double, kLbpBins + 1> lbp_features(const ImageU8& gray_block);

// ---------------------------------------------------------------------------
// Combined
// ---------------------------------------------------------------------------

struct TextureSpec {
    GaborParams gabor;
    GlcmSpec glcm;
};

std::vector<std::string> feature_names(const TextureSpec& spec);

FeatureBlock extract_features(const ImageU8& gray_u8, const ImageF& gray, const RegionGrid& grid,
                              const TextureSpec& spec, Exec exec = Exec::parallel);

FeatureBlock extract_features(const ImageU8& gray_u8, std::span<const ImageF> gabor_responses,
                              const RegionGrid& grid, const TextureSpec& spec, Exec exec = Exec::parallel);

}  // namespace pcbfeat::texture
