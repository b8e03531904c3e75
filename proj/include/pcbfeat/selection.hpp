#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcbfeat/features.hpp"
#include "pcbfeat/parallel.hpp"

namespace pcbfeat::selection {

/// Regions x features with per-row decile labels, one per (image, ksize).
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::size_t rows = 0;
    std::vector<double> values;  // row-major
    std::vector<int> labels;     // decile 0..10 per row
    std::string image_id;
    int ksize = 0;

    std::size_t cols() const { return feature_names.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

    /// Checks shape, finiteness, unique names and label range.
    void validate() const;
};

enum class TargetRule { binary, deciles };

struct ForestConfig {
    int n_trees = 100;
    int max_depth = -1;          // < 0 means unlimited
    int min_samples_split = 2;
    int features_per_split = 0;  // 0 -> round(sqrt(F))
    bool bootstrap = true;
    std::uint64_t seed = 0;
    TargetRule target = TargetRule::binary;
    int positive_decile = 5;     // binary target: decile >= this is a component

    void validate() const;
    int resolved_features_per_split(std::size_t n_features) const;
};

/// 1 - sum p_j^2. Throws InvalidDistribution unless p >= 0 and sums to 1.
double gini_impurity(std::span<const double> proportions);

/// i_parent - (p_left * i_left + p_right * i_right). Throws InvalidWeights
/// unless the weights are non-negative and sum to 1.
double gini_gain(double i_parent, double i_left, double i_right, double p_left, double p_right);

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;  // x <= threshold goes left
    int left = -1;
    int right = -1;
    double impurity = 0.0;
    double sample_fraction = 0.0;  // node samples / root samples
    double gain = 0.0;             // impurity decrease of this split
    std::vector<double> class_distribution;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

class ForestModel {
public:
    ForestModel() = default;
    ForestModel(std::size_t n_features, int n_classes, std::vector<Tree> trees)
        : n_features_(n_features), n_classes_(n_classes), trees_(std::move(trees)) {}

    std::size_t n_features() const { return n_features_; }
    int n_classes() const { return n_classes_; }
    const std::vector<Tree>& trees() const { return trees_; }

    /// Mean of the leaf class distributions across trees.
    std::vector<double> predict_proba(std::span<const double> row) const;

    bool operator==(const ForestModel& other) const;

private:
    std::size_t n_features_ = 0;
    int n_classes_ = 0;
    std::vector<Tree> trees_;
};

/// Class index per row under the target rule. Throws EmptyMatrix or
/// DegenerateTarget (fewer than two classes present).
std::vector<int> make_targets(const FeatureMatrix& matrix, const ForestConfig& config);
int class_count(const ForestConfig& config);

/// Independent RNG seed for tree `index`; a pure function of (seed, index).
std::uint64_t tree_seed(std::uint64_t seed, std::size_t index);

Tree fit_tree(const FeatureMatrix& matrix, std::span<const int> targets, int n_classes,
              const ForestConfig& config, std::uint64_t seed);

ForestModel fit_forest(const FeatureMatrix& matrix, const ForestConfig& config, Exec exec = Exec::parallel);

/// Sum over split nodes of sample_fraction * gain, per feature, over all trees.
std::vector<double> raw_feature_importances(const ForestModel& model);

/// raw_feature_importances normalized to sum 1 (all zeros if nothing split).
std::vector<double> feature_importances(const ForestModel& model);

struct QuartileSummary {
    std::string group;
    std::size_t count = 0;
    double min = 0.0;
    double lower_hinge = 0.0;
    double median = 0.0;
    double upper_hinge = 0.0;
    double max = 0.0;
};

/// Median is the lower-middle element; hinges are the (lower-middle)
/// medians of the values strictly below and above the median position.
QuartileSummary tukey_quartiles(std::span<const double> values, std::string group = {});

struct ImageImportance {
    std::string image_id;
    int ksize = 0;
    std::vector<std::string> feature_names;
    std::vector<double> importance;
};

enum class GroupBy { ksize, family, feature };

/// Pools importances across images per group and summarizes each group.
std::vector<QuartileSummary> aggregate_importances(const std::vector<ImageImportance>& per_image, GroupBy group_by);

struct RankedFeature {
    std::string name;
    Family family = Family::color;
    QuartileSummary summary;
};

/// Features sorted by median importance across images (descending, ties by
/// name), truncated to `top_k`.
std::vector<RankedFeature> rank_features(const std::vector<ImageImportance>& per_image, std::size_t top_k);

}  // namespace pcbfeat::selection
