#include <cmath>
#include <numbers>

#include "pcbfeat/stats.hpp"
#include "pcbfeat/texture.hpp"

namespace pcbfeat::texture {
namespace {

std::string angle_tag(double deg) {
    const double r = std::round(deg);
    return r == deg ? std::to_string(static_cast<long>(r)) : std::to_string(deg);
}

}  // namespace

int GaborParams::extent() const {
    return kernel_extent > 0 ? kernel_extent : 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

void GaborParams::validate() const {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(gamma > 0.0)) throw InvalidParams("gabor lambda, sigma, gamma must be > 0");
    if (extent() % 2 == 0) throw InvalidParams("gabor kernel extent must be odd");
    if (thetas.empty()) throw InvalidParams("gabor bank needs at least one orientation");
}

Kernel2D gabor_kernel(const GaborParams& params, double theta_deg) {
    params.validate();
    const int n = params.extent();
    const int r = n / 2;
    const double th = theta_deg * std::numbers::pi / 180.0;
    const double ps = params.psi * std::numbers::pi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    const double inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma);
    const double g2 = params.gamma * params.gamma;
    Kernel2D k{n, n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) {
            const double xr = x * c + y * s;
            const double yr = -x * s + y * c;
            k.taps[static_cast<std::size_t>(y + r) * n + (x + r)] =
                std::exp(-(xr * xr + g2 * yr * yr) * inv2s2) *
                std::cos(2.0 * std::numbers::pi * xr / params.lambda + ps);
        }
    }
    return k;
}

std::vector<ImageF> gabor_responses(const ImageF& gray, const GaborParams& params, Exec exec) {
    std::vector<ImageF> out;
    out.reserve(params.thetas.size());
    for (double theta : params.thetas) {
        const Kernel2D k = gabor_kernel(params, theta);
        out.push_back(exec == Exec::parallel ? kernels::correlate(gray, k)
                                             : kernels::correlate_reference(gray, k));
    }
    return out;
}

std::vector<std::string> gabor_feature_names(const GaborParams& params) {
    std::vector<std::string> names;
    for (double t : params.thetas) {
        names.push_back("gabor_t" + angle_tag(t) + "_mean");
        names.push_back("gabor_t" + angle_tag(t) + "_var");
    }
    return names;
}

FeatureBlock gabor_features(const ImageF& gray, const GaborParams& params, const RegionGrid& grid, Exec exec) {
    const auto responses = gabor_responses(gray, params, exec);
    return gabor_features(responses, params, grid, exec);
}

FeatureBlock gabor_features(std::span<const ImageF> responses, const GaborParams& params, const RegionGrid& grid,
                            Exec exec) {
    if (responses.size() != params.thetas.size()) throw InvalidParams("one gabor response per orientation expected");
    for (const auto& r : responses) {
        if (grid.cols * grid.ksize > r.width() || grid.rows * grid.ksize > r.height()) {
            throw DimensionMismatch("region grid exceeds image bounds");
        }
    }
    FeatureBlock block(gabor_feature_names(params), grid.size());
    parallel_for(exec, static_cast<std::int64_t>(grid.size()), [&](std::int64_t r) {
        const auto [x0, y0] = grid.regions[r];
        auto row = block.row(static_cast<std::size_t>(r));
        std::vector<double> mags;
        mags.reserve(static_cast<std::size_t>(grid.ksize) * grid.ksize);
        for (std::size_t t = 0; t < responses.size(); ++t) {
            mags.clear();
            for (int y = y0; y < y0 + grid.ksize; ++y)
                for (int x = x0; x < x0 + grid.ksize; ++x) mags.push_back(std::fabs(responses[t].at(x, y)));
            row[2 * t] = stats::mean(mags);
            row[2 * t + 1] = stats::variance(mags);
        }
    });
    return block;
}

}  // namespace pcbfeat::texture
