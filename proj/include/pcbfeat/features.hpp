#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcbfeat {

enum class Family { color, shape, texture };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Family of a feature column, derived from its name prefix.
Family family_of(std::string_view feature_name);

/// Named per-region feature values: rows follow grid order, columns follow
/// `names`.
struct FeatureBlock {
    std::vector<std::string> names;
    std::size_t rows = 0;
    std::vector<double> values;  // row-major, rows x names.size()

    FeatureBlock() = default;
    FeatureBlock(std::vector<std::string> column_names, std::size_t row_count)
        : names(std::move(column_names)), rows(row_count), values(rows * names.size(), 0.0) {}

    std::size_t cols() const { return names.size(); }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    std::span<double> row(std::size_t r) { return {values.data() + r * cols(), cols()}; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }
    std::size_t column(std::string_view name) const;

    /// Appends the columns of `other` (same row count) to the right.
    void append(const FeatureBlock& other);
};

}  // namespace pcbfeat
