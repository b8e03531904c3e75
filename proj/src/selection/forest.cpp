#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "pcbfeat/error.hpp"
#include "pcbfeat/selection.hpp"

namespace pcbfeat::selection {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Platform-stable bounded draw (std distributions are implementation-defined).
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double impurity_from_counts(std::span<const double> counts, double total) {
    double s = 0.0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
    double left_impurity = 0.0;
    double right_impurity = 0.0;
};

bool better(const SplitChoice& cand, const SplitChoice& best) {
    if (best.feature < 0) return true;
    if (cand.gain != best.gain) return cand.gain > best.gain;
    if (cand.feature != best.feature) return cand.feature < best.feature;
    return cand.threshold < best.threshold;
}

double midpoint(double a, double b) {
    const double m = a + (b - a) / 2.0;
    return (m >= b || !std::isfinite(m)) ? a : m;
}

}  // namespace

void FeatureMatrix::validate() const {
    if (rows == 0 || feature_names.empty()) throw EmptyMatrix("feature matrix is empty");
    if (values.size() != rows * cols()) throw DimensionMismatch("feature matrix value count mismatch");
    if (labels.size() != rows) throw DimensionMismatch("feature matrix label count mismatch");
    std::set<std::string> seen(feature_names.begin(), feature_names.end());
    if (seen.size() != feature_names.size()) throw InvalidParams("duplicate feature names");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidParams("feature matrix contains a non-finite value");
    for (int l : labels)
        if (l < 0 || l > 10) throw InvalidParams("label outside 0..10");
}

void ForestConfig::validate() const {
    if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    if (features_per_split < 0) throw ConfigError("features_per_split must be >= 0");
    if (positive_decile < 0 || positive_decile > 10) throw ConfigError("positive_decile must be in 0..10");
}

int ForestConfig::resolved_features_per_split(std::size_t n_features) const {
    if (features_per_split > 0) return std::min<int>(features_per_split, static_cast<int>(n_features));
    return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_features)))));
}

double gini_impurity(std::span<const double> p) {
    double sum = 0.0, sq = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw InvalidDistribution("negative or NaN class proportion");
        sum += v;
        sq += v * v;
    }
    if (p.empty() || std::fabs(sum - 1.0) > 1e-9) throw InvalidDistribution("class proportions must sum to 1");
    return 1.0 - sq;
}

double gini_gain(double i_parent, double i_left, double i_right, double p_left, double p_right) {
    if (!(p_left >= 0.0) || !(p_right >= 0.0) || std::fabs(p_left + p_right - 1.0) > 1e-9) {
        throw InvalidWeights("child weights must be non-negative and sum to 1");
    }
    return i_parent - (p_left * i_left + p_right * i_right);
}

int class_count(const ForestConfig& config) { return config.target == TargetRule::binary ? 2 : 11; }

std::vector<int> make_targets(const FeatureMatrix& matrix, const ForestConfig& config) {
    if (matrix.rows == 0) throw EmptyMatrix("feature matrix has no rows");
    std::vector<int> t(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        t[i] = config.target == TargetRule::binary ? (matrix.labels[i] >= config.positive_decile ? 1 : 0)
                                                   : matrix.labels[i];
    }
    const bool mixed = std::ranges::any_of(t, [&](int v) { return v != t.front(); });
    if (!mixed) throw DegenerateTarget("only one target class present in " + matrix.image_id);
    return t;
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t index) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

Tree fit_tree(const FeatureMatrix& m, std::span<const int> targets, int n_classes, const ForestConfig& config,
              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = m.rows;
    const std::size_t n_features = m.cols();
    std::vector<std::size_t> idx(n);
    if (config.bootstrap) {
        for (auto& i : idx) i = draw(rng, n);
    } else {
        std::iota(idx.begin(), idx.end(), 0);
    }
    const int mtry = config.resolved_features_per_split(n_features);
    const double root_n = static_cast<double>(n);

    struct Pending {
        int node;
        std::size_t begin, end;
        int depth;
    };
    Tree tree;
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, n, 0});

    std::vector<std::size_t> order(n_features);
    std::vector<std::pair<double, int>> column;
    std::vector<double> left(n_classes), total(n_classes);

    while (!stack.empty()) {
        const Pending job = stack.back();
        stack.pop_back();
        const std::size_t count = job.end - job.begin;
        std::fill(total.begin(), total.end(), 0.0);
        for (std::size_t k = job.begin; k < job.end; ++k) total[targets[idx[k]]] += 1.0;
        const double node_n = static_cast<double>(count);
        const double node_imp = impurity_from_counts(total, node_n);
        {
            TreeNode& node = tree.nodes[job.node];
            node.impurity = node_imp;
            node.sample_fraction = node_n / root_n;
            node.class_distribution.resize(n_classes);
            for (int c = 0; c < n_classes; ++c) node.class_distribution[c] = total[c] / node_n;
        }
        if (node_imp <= 0.0 || static_cast<int>(count) < config.min_samples_split ||
            (config.max_depth >= 0 && job.depth >= config.max_depth)) {
            continue;
        }

        // Visit features in a random order until mtry non-constant ones were scored.
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n_features; i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);
        SplitChoice best;
        int scored = 0;
        for (std::size_t oi = 0; oi < n_features && scored < mtry; ++oi) {
            const int f = static_cast<int>(order[oi]);
            column.clear();
            for (std::size_t k = job.begin; k < job.end; ++k) column.emplace_back(m.at(idx[k], f), targets[idx[k]]);
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++scored;
            std::fill(left.begin(), left.end(), 0.0);
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                left[column[k].second] += 1.0;
                if (column[k].first == column[k + 1].first) continue;
                const double nl = static_cast<double>(k + 1);
                const double nr = node_n - nl;
                double sl = 0.0, sr = 0.0;
                for (int c = 0; c < n_classes; ++c) {
                    const double r = total[c] - left[c];
                    sl += (left[c] / nl) * (left[c] / nl);
                    sr += (r / nr) * (r / nr);
                }
                SplitChoice cand{f, midpoint(column[k].first, column[k + 1].first), 0.0, 1.0 - sl, 1.0 - sr};
                cand.gain = node_imp - (nl / node_n * cand.left_impurity + nr / node_n * cand.right_impurity);
                if (better(cand, best)) best = cand;
            }
        }
        if (best.feature < 0) continue;

        auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(job.begin),
                                         idx.begin() + static_cast<std::ptrdiff_t>(job.end),
                                         [&](std::size_t r) { return m.at(r, best.feature) <= best.threshold; });
        const std::size_t split = static_cast<std::size_t>(mid - idx.begin());
        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[job.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.gain = best.gain;
        node.left = l;
        node.right = l + 1;
        stack.push_back({l + 1, split, job.end, job.depth + 1});
        stack.push_back({l, job.begin, split, job.depth + 1});
    }
    return tree;
}

ForestModel fit_forest(const FeatureMatrix& matrix, const ForestConfig& config, Exec exec) {
    config.validate();
    matrix.validate();
    const std::vector<int> targets = make_targets(matrix, config);
    const int n_classes = class_count(config);
    std::vector<Tree> trees(static_cast<std::size_t>(config.n_trees));
    parallel_for(exec, config.n_trees, [&](std::int64_t t) {
        trees[t] = fit_tree(matrix, targets, n_classes, config, tree_seed(config.seed, static_cast<std::size_t>(t)));
    });
    return ForestModel(matrix.cols(), n_classes, std::move(trees));
}

std::vector<double> ForestModel::predict_proba(std::span<const double> row) const {
    std::vector<double> p(n_classes_, 0.0);
    for (const auto& tree : trees_) {
        int k = 0;
        while (!tree.nodes[k].is_leaf()) {
            const auto& nd = tree.nodes[k];
            k = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        for (int c = 0; c < n_classes_; ++c) p[c] += tree.nodes[k].class_distribution[c];
    }
    if (!trees_.empty())
        for (double& v : p) v /= static_cast<double>(trees_.size());
    return p;
}

bool ForestModel::operator==(const ForestModel& o) const {
    if (n_features_ != o.n_features_ || n_classes_ != o.n_classes_ || trees_.size() != o.trees_.size()) return false;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        const auto& a = trees_[t].nodes;
        const auto& b = o.trees_[t].nodes;
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].feature != b[i].feature || a[i].threshold != b[i].threshold || a[i].left != b[i].left ||
                a[i].right != b[i].right || a[i].impurity != b[i].impurity || a[i].gain != b[i].gain ||
                a[i].sample_fraction != b[i].sample_fraction || a[i].class_distribution != b[i].class_distribution) {
                return false;
            }
        }
    }
    return true;
}

std::vector<double> raw_feature_importances(const ForestModel& model) {
    std::vector<double> imp(model.n_features(), 0.0);
    for (const auto& tree : model.trees()) {
        for (const auto& nd : tree.nodes) {
            if (!nd.is_leaf()) imp[nd.feature] += nd.sample_fraction * nd.gain;
        }
    }
    return imp;
}

std::vector<double> feature_importances(const ForestModel& model) {
    std::vector<double> imp = raw_feature_importances(model);
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total > 0.0)
        for (double& v : imp) v /= total;
    return imp;
}

}  // namespace pcbfeat::selection
