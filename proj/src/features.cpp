#include "pcbfeat/features.hpp"

#include <algorithm>
#include <array>

#include "pcbfeat/error.hpp"

namespace pcbfeat {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::color: return "color";
        case Family::shape: return "shape";
        case Family::texture: return "texture";
    }
    return "color";
}

Family parse_family(std::string_view name) {
    if (name == "color") return Family::color;
    if (name == "shape") return Family::shape;
    if (name == "texture") return Family::texture;
    throw ConfigError("unknown feature family '" + std::string(name) + "'");
}

Family family_of(std::string_view feature_name) {
    static constexpr std::array<std::string_view, 3> shape_prefixes = {"corner_", "blob_", "canny_"};
    static constexpr std::array<std::string_view, 3> texture_prefixes = {"gabor_", "glcm_", "lbp_"};
    auto starts = [&](std::string_view p) { return feature_name.starts_with(p); };
    if (std::ranges::any_of(shape_prefixes, starts)) return Family::shape;
    if (std::ranges::any_of(texture_prefixes, starts)) return Family::texture;
    return Family::color;
}

std::size_t FeatureBlock::column(std::string_view name) const {
    auto it = std::ranges::find(names, name);
    if (it == names.end()) throw InvalidParams("no feature column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
}

void FeatureBlock::append(const FeatureBlock& other) {
    if (names.empty()) {
        *this = other;
        return;
    }
    if (other.rows != rows) throw DimensionMismatch("feature blocks differ in row count");
    const std::size_t a = cols();
    const std::size_t b = other.cols();
    std::vector<double> merged(rows * (a + b));
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(values.begin() + r * a, a, merged.begin() + r * (a + b));
        std::copy_n(other.values.begin() + r * b, b, merged.begin() + r * (a + b) + a);
    }
    names.insert(names.end(), other.names.begin(), other.names.end());
    values = std::move(merged);
}

}  // namespace pcbfeat
