#include "pcbfeat/shape.hpp"

namespace pcbfeat::shape {

std::vector<std::string> feature_names() {
    return {"corner_count",        "corner_mean_response",       "blob_count",
            "blob_mean_sigma",     "canny_contour_count",        "canny_max_contour_area",
            "canny_total_contour_perimeter", "canny_edge_pixel_fraction"};
}

std::array<double, kFeatureCount> region_features(const ImageF& gray_block, int ksize) {
    std::array<double, kFeatureCount> f{};

    const CornerSet corners = shi_tomasi_corners(gray_block, CornerParams::for_ksize(ksize));
    f[0] = static_cast<double>(corners.size());
    for (const auto& c : corners) f[1] += c.response;
    if (!corners.empty()) f[1] /= static_cast<double>(corners.size());

    const auto blobs = doh_blobs(gray_block, BlobParams::for_ksize(ksize));
    f[2] = static_cast<double>(blobs.size());
    for (const auto& b : blobs) f[3] += b.sigma;
    if (!blobs.empty()) f[3] /= static_cast<double>(blobs.size());

    const EdgeStats e = canny_contour_features(gray_block, EdgeParams{});
    f[4] = e.contour_count;
    f[5] = e.max_contour_area;
    f[6] = e.total_contour_perimeter;
    f[7] = e.edge_pixel_fraction;
    return f;
}

FeatureBlock extract_features(const ImageF& gray, const RegionGrid& grid, Exec exec) {
    if (gray.channels() != 1) throw InvalidParams("shape features expect a gray image");
    if (grid.cols * grid.ksize > gray.width() || grid.rows * grid.ksize > gray.height()) {
        throw DimensionMismatch("region grid exceeds image bounds");
    }
    FeatureBlock block(feature_names(), grid.size());
    parallel_for(exec, static_cast<std::int64_t>(grid.size()), [&](std::int64_t r) {
        const auto [x0, y0] = grid.regions[r];
        const auto f = region_features(gray.crop(x0, y0, grid.ksize, grid.ksize), grid.ksize);
        std::copy(f.begin(), f.end(), block.row(static_cast<std::size_t>(r)).begin());
    });
    return block;
}

}  // namespace pcbfeat::shape
