#include <bit>

#include "pcbfeat/stats.hpp"
#include "pcbfeat/texture.hpp"

namespace pcbfeat::texture {
namespace {

// Row-major 3x3 indices of the neighbours, clockwise from the top-left.
constexpr std::array<int, 8> kNeighbour = {0, 1, 2, 5, 8, 7, 6, 3};

std::uint8_t rotl8(std::uint8_t v, int n) {
    return static_cast<std::uint8_t>((v << n) | (v >> (8 - n)));
}

}  // namespace

int circular_transitions(std::uint8_t pattern) {
    return std::popcount(static_cast<unsigned>(pattern ^ rotl8(pattern, 1)));
}

std::uint8_t min_rotation(std::uint8_t pattern) {
    std::uint8_t best = pattern;
    for (int n = 1; n < 8; ++n) best = std::min(best, rotl8(pattern, n));
    return best;
}

LbpCode classify_pattern(std::uint8_t pattern) {
    LbpCode c;
    c.value = pattern;
    c.rotated_value = min_rotation(pattern);
    c.uniform = circular_transitions(pattern) <= 2;
    c.bin = c.uniform ? std::popcount(static_cast<unsigned>(pattern)) : kLbpBins - 1;
    return c;
}

LbpCode rlbp_ulbp_code(std::span<const std::uint8_t, 9> block) {
    const std::uint8_t centre = block[4];
    std::uint8_t raw = 0;
    for (int i = 0; i < 8; ++i) {
        if (block[kNeighbour[i]] > centre) raw |= static_cast<std::uint8_t>(1u << i);
    }
    return classify_pattern(raw);
}

std::array<double, kLbpBins> lbp_histogram(const ImageU8& g) {
    if (g.width() < 3 || g.height() < 3) {
        throw DegenerateRegion("LBP needs at least a 3x3 region, got " + std::to_string(g.width()) + "x" +
                               std::to_string(g.height()));
    }
    std::array<double, kLbpBins> hist{};
    std::array<std::uint8_t, 9> nb{};
    for (int y = 1; y < g.height() - 1; ++y) {
        for (int x = 1; x < g.width() - 1; ++x) {
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) nb[j * 3 + i] = g.at(x + i - 1, y + j - 1);
            hist[rlbp_ulbp_code(nb).bin] += 1.0;
        }
    }
    const double n = static_cast<double>(g.width() - 2) * (g.height() - 2);
    for (double& v : hist) v /= n;
    return hist;
}

std::vector<std::string> lbp_feature_names() {
    std::vector<std::string> names;
    for (int b = 0; b < kLbpBins; ++b) names.push_back("lbp_bin" + std::to_string(b));
    names.push_back("lbp_entropy");
    return names;
}

std::array<double, kLbpBins + 1> lbp_features(const ImageU8& gray_block) {
    const auto hist = lbp_histogram(gray_block);
    std::array<double, kLbpBins + 1> f{};
    std::copy(hist.begin(), hist.end(), f.begin());
    f[kLbpBins] = stats::entropy(hist);
    return f;
}

std::vector<std::string> feature_names(const TextureSpec& spec) {
    auto names = gabor_feature_names(spec.gabor);
    for (auto& n : glcm_feature_names(spec.glcm)) names.push_back(std::move(n));
    for (auto& n : lbp_feature_names()) names.push_back(std::move(n));
    return names;
}

FeatureBlock extract_features(const ImageU8& gray_u8, const ImageF& gray, const RegionGrid& grid,
                              const TextureSpec& spec, Exec exec) {
    if (gray_u8.width() != gray.width() || gray_u8.height() != gray.height()) {
        throw DimensionMismatch("gray rasters differ in size");
    }
    const auto responses = gabor_responses(gray, spec.gabor, exec);
    return extract_features(gray_u8, responses, grid, spec, exec);
}

FeatureBlock extract_features(const ImageU8& gray_u8, std::span<const ImageF> gabor_responses,
                              const RegionGrid& grid, const TextureSpec& spec, Exec exec) {
    FeatureBlock block = gabor_features(gabor_responses, spec.gabor, grid, exec);
    FeatureBlock local(glcm_feature_names(spec.glcm), grid.size());
    const std::size_t n_glcm = local.cols();
    {
        auto lbp_names = lbp_feature_names();
        local.names.insert(local.names.end(), lbp_names.begin(), lbp_names.end());
        local.values.assign(grid.size() * local.names.size(), 0.0);
    }
    parallel_for(exec, static_cast<std::int64_t>(grid.size()), [&](std::int64_t r) {
        const auto [x0, y0] = grid.regions[r];
        const ImageU8 blk = gray_u8.crop(x0, y0, grid.ksize, grid.ksize);
        auto row = local.row(static_cast<std::size_t>(r));
        glcm_region_features(blk, spec.glcm, row.first(n_glcm));
        if (blk.width() >= 3 && blk.height() >= 3) {
            const auto lbp = lbp_features(blk);
            std::copy(lbp.begin(), lbp.end(), row.begin() + static_cast<std::ptrdiff_t>(n_glcm));
        }
    });
    block.append(local);
    return block;
}

}  // namespace pcbfeat::texture
