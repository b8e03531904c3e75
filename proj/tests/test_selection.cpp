#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pcbfeat/color.hpp"
#include "pcbfeat/selection.hpp"

using namespace pcbfeat;
using namespace pcbfeat::selection;

namespace {

FeatureMatrix make_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    FeatureMatrix m;
    for (std::size_t c = 0; c < cols; ++c) m.feature_names.push_back("f" + std::to_string(c));
    m.rows = rows;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    m.values.resize(rows * cols);
    for (double& v : m.values) v = u(rng);
    m.labels.resize(rows);
    for (int& l : m.labels) l = static_cast<int>(rng() % 11);
    m.image_id = "synthetic";
    m.ksize = 5;
    return m;
}

/// Labels follow column 0 with label noise so trees keep splitting below the root.
FeatureMatrix informative_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    FeatureMatrix m = make_matrix(rows, cols, seed);
    std::mt19937_64 rng(seed + 1);
    for (std::size_t r = 0; r < rows; ++r) {
        const bool flip = rng() % 5 == 0;
        const bool pos = (m.at(r, 0) + 0.3 * m.at(r, 1) > 0.65) != flip;
        m.labels[r] = pos ? 8 : 1;
    }
    return m;
}

TreeNode split_node(int feature, double fraction, double gain) {
    TreeNode n;
    n.feature = feature;
    n.left = 1;
    n.right = 2;
    n.sample_fraction = fraction;
    n.gain = gain;
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gini
// ---------------------------------------------------------------------------

TEST(Gini, Examples) {
    EXPECT_DOUBLE_EQ(gini_impurity(std::vector<double>{1.0}), 0.0);
    EXPECT_DOUBLE_EQ(gini_impurity(std::vector<double>{0.5, 0.5}), 0.5);
    EXPECT_DOUBLE_EQ(gini_impurity(std::vector<double>{0.25, 0.75}), 0.375);
}

TEST(Gini, InvalidDistribution) {
    EXPECT_THROW(gini_impurity(std::vector<double>{0.5, 0.6}), InvalidDistribution);
    EXPECT_THROW(gini_impurity(std::vector<double>{1.5, -0.5}), InvalidDistribution);
    EXPECT_THROW(gini_impurity(std::vector<double>{}), InvalidDistribution);
}

TEST(Gini, GainExamples) {
    EXPECT_DOUBLE_EQ(gini_gain(0.5, 0.0, 0.0, 0.5, 0.5), 0.5);
    EXPECT_EQ(gini_gain(0.375, 0.375, 0.375, 0.25, 0.75), 0.0);
    EXPECT_NEAR(gini_gain(0.375, 0.375, 0.375, 0.3, 0.7), 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(gini_gain(0.5, 0.375, 0.375, 0.5, 0.5), 0.125);
    EXPECT_THROW(gini_gain(0.5, 0.0, 0.0, 0.6, 0.6), InvalidWeights);
    EXPECT_THROW(gini_gain(0.5, 0.0, 0.0, -0.2, 1.2), InvalidWeights);
}

// ---------------------------------------------------------------------------
// Forest
// ---------------------------------------------------------------------------

TEST(Forest, SeparatingFeatureIsMostImportant) {
    FeatureMatrix m = make_matrix(200, 11, 3);
    for (std::size_t r = 0; r < m.rows; ++r) m.labels[r] = m.at(r, 7) > 0.5 ? 9 : 2;
    const auto imp = feature_importances(fit_forest(m, ForestConfig{}));
    EXPECT_EQ(std::max_element(imp.begin(), imp.end()) - imp.begin(), 7);
}

TEST(Forest, DegenerateAndEmptyInputs) {
    FeatureMatrix m = make_matrix(20, 3, 1);
    std::fill(m.labels.begin(), m.labels.end(), 3);
    EXPECT_THROW(fit_forest(m, ForestConfig{}), DegenerateTarget);
    std::fill(m.labels.begin(), m.labels.end(), 10);
    EXPECT_THROW(fit_forest(m, ForestConfig{}), DegenerateTarget);
    FeatureMatrix empty = make_matrix(0, 3, 1);
    EXPECT_THROW(fit_forest(empty, ForestConfig{}), EmptyMatrix);
}

TEST(Forest, DecileTargetNeedsTwoDistinctDeciles) {
    FeatureMatrix m = make_matrix(20, 3, 1);
    for (std::size_t r = 0; r < m.rows; ++r) m.labels[r] = r % 2 ? 6 : 9;
    ForestConfig binary;
    EXPECT_THROW(fit_forest(m, binary), DegenerateTarget);
    ForestConfig deciles;
    deciles.target = TargetRule::deciles;
    EXPECT_NO_THROW(fit_forest(m, deciles));
}

TEST(Forest, ConfigValidation) {
    const FeatureMatrix m = informative_matrix(30, 3, 1);
    ForestConfig c;
    c.n_trees = 0;
    EXPECT_THROW(fit_forest(m, c), ConfigError);
    c = ForestConfig{};
    c.min_samples_split = 1;
    EXPECT_THROW(fit_forest(m, c), ConfigError);
    EXPECT_EQ(ForestConfig{}.resolved_features_per_split(78), 9);
    EXPECT_EQ(ForestConfig{}.resolved_features_per_split(133), 12);
}

TEST(Forest, NonFiniteValuesRejected) {
    FeatureMatrix m = informative_matrix(30, 3, 1);
    m.values[4] = std::nan("");
    EXPECT_THROW(fit_forest(m, ForestConfig{}), InvalidParams);
}

TEST(Forest, DeterministicAcrossWorkerCounts) {
    const FeatureMatrix m = informative_matrix(150, 9, 5);
    ForestConfig c;
    c.n_trees = 24;
    c.seed = 77;
    const ForestModel ref = fit_forest(m, c, Exec::serial);
    for (int workers : {1, 2, 4, 8}) {
        const int prev = set_worker_count(workers);
        const ForestModel got = fit_forest(m, c, Exec::parallel);
        set_worker_count(prev);
        EXPECT_TRUE(got == ref) << workers << " workers";
        EXPECT_EQ(feature_importances(got), feature_importances(ref));
    }
    c.seed = 78;
    EXPECT_FALSE(fit_forest(m, c) == ref);
}

TEST(Forest, SplitsSeparateSamplesAndFractionsAddUp) {
    const FeatureMatrix m = informative_matrix(120, 6, 9);
    ForestConfig c;
    c.n_trees = 10;
    const ForestModel model = fit_forest(m, c);
    for (const Tree& t : model.trees()) {
        EXPECT_DOUBLE_EQ(t.nodes[0].sample_fraction, 1.0);
        for (const TreeNode& n : t.nodes) {
            if (n.is_leaf()) continue;
            const TreeNode& l = t.nodes[n.left];
            const TreeNode& r = t.nodes[n.right];
            EXPECT_GT(l.sample_fraction, 0.0);
            EXPECT_GT(r.sample_fraction, 0.0);
            EXPECT_NEAR(l.sample_fraction + r.sample_fraction, n.sample_fraction, 1e-12);
            EXPECT_GE(n.gain, 0.0);
            const double pl = l.sample_fraction / n.sample_fraction;
            EXPECT_NEAR(n.gain, gini_gain(n.impurity, l.impurity, r.impurity, pl, 1.0 - pl), 1e-12);
        }
    }
}

TEST(Forest, PredictProbaSeparatesTrainingClasses) {
    FeatureMatrix m = make_matrix(100, 4, 8);
    for (std::size_t r = 0; r < m.rows; ++r) m.labels[r] = m.at(r, 2) > 0.4 ? 7 : 0;
    const ForestModel model = fit_forest(m, ForestConfig{});
    for (std::size_t r = 0; r < m.rows; ++r) {
        const auto p = model.predict_proba(std::span<const double>(m.values.data() + r * 4, 4));
        EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
        EXPECT_EQ(p[1] > 0.5, m.labels[r] == 7);
    }
}

// ---------------------------------------------------------------------------
// Importance
// ---------------------------------------------------------------------------

TEST(Importance, SingleSplitMatchesHandComputation) {
    FeatureMatrix m;
    m.feature_names = {"const", "x"};
    m.rows = 6;
    m.values = {1, 1, 1, 2, 1, 3, 1, 4, 1, 5, 1, 6};
    m.labels = {0, 0, 10, 0, 10, 10};  // binary targets 0 0 1 0 1 1
    ForestConfig c;
    c.n_trees = 1;
    c.max_depth = 1;
    c.bootstrap = false;
    c.features_per_split = 2;
    const ForestModel model = fit_forest(m, c);
    const TreeNode& root = model.trees()[0].nodes[0];
    ASSERT_EQ(root.feature, 1);
    // Gains by cut: after 1 -> 0.1, 2 -> 0.25, 3 -> 1/18, 4 -> 0.25, 5 -> 0.1;
    // the tie at 0.25 goes to the lower threshold.
    EXPECT_DOUBLE_EQ(root.threshold, 2.5);
    const double expected = 0.5 - (4.0 / 6.0) * (1.0 - (1.0 / 16.0 + 9.0 / 16.0));
    EXPECT_DOUBLE_EQ(raw_feature_importances(model)[1], 1.0 * expected);
    EXPECT_EQ(raw_feature_importances(model)[0], 0.0);
    EXPECT_EQ(feature_importances(model), (std::vector<double>{0.0, 1.0}));
}

TEST(Importance, TwoHandBuiltStumps) {
    Tree a, b;
    a.nodes = {split_node(0, 1.0, 0.3), TreeNode{}, TreeNode{}};
    b.nodes = {split_node(1, 1.0, 0.3), TreeNode{}, TreeNode{}};
    const ForestModel model(3, 2, {a, b});
    EXPECT_EQ(feature_importances(model), (std::vector<double>{0.5, 0.5, 0.0}));
    const ForestModel empty(3, 2, {Tree{{TreeNode{}}}});
    EXPECT_EQ(feature_importances(empty), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(Importance, NonNegativeAndNormalized) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ForestConfig c;
        c.n_trees = 20;
        c.seed = seed;
        const auto imp = feature_importances(fit_forest(informative_matrix(80, 7, seed), c));
        for (double v : imp) EXPECT_GE(v, 0.0);
        EXPECT_NEAR(std::accumulate(imp.begin(), imp.end(), 0.0), 1.0, 1e-9);
    }
}

TEST(Importance, MonotoneColumnTransformKeepsTopology) {
    const FeatureMatrix m = informative_matrix(150, 6, 21);
    ForestConfig c;
    c.n_trees = 15;
    c.seed = 4;
    const ForestModel a = fit_forest(m, c);
    for (std::size_t col : {0u, 3u}) {
        FeatureMatrix t = m;
        for (std::size_t r = 0; r < t.rows; ++r) t.values[r * 6 + col] = std::exp(3.0 * t.at(r, col)) - 7.0;
        const ForestModel b = fit_forest(t, c);
        ASSERT_EQ(a.trees().size(), b.trees().size());
        for (std::size_t k = 0; k < a.trees().size(); ++k) {
            const auto& na = a.trees()[k].nodes;
            const auto& nb = b.trees()[k].nodes;
            ASSERT_EQ(na.size(), nb.size());
            for (std::size_t i = 0; i < na.size(); ++i) {
                EXPECT_EQ(na[i].feature, nb[i].feature);
                EXPECT_EQ(na[i].left, nb[i].left);
                EXPECT_EQ(na[i].gain, nb[i].gain);
            }
        }
        EXPECT_EQ(feature_importances(a), feature_importances(b));
    }
}

TEST(Importance, ColumnPermutationPermutesImportances) {
    // With every feature scored at every node the column order only matters
    // through exact gain ties, which go to the lower index. Gain depends only
    // on class counts, so ties already appear one level below the root here;
    // root splits over 200 bootstrap rows are tie-free.
    const std::size_t F = 6;
    const FeatureMatrix m = informative_matrix(200, F, 33);
    ForestConfig c;
    c.n_trees = 30;
    c.seed = 12;
    c.features_per_split = static_cast<int>(F);
    c.max_depth = 1;
    const auto base = feature_importances(fit_forest(m, c));
    const std::vector<std::size_t> perm{4, 0, 5, 2, 1, 3};  // new column j holds old column perm[j]
    FeatureMatrix p = m;
    for (std::size_t j = 0; j < F; ++j) {
        p.feature_names[j] = m.feature_names[perm[j]];
        for (std::size_t r = 0; r < m.rows; ++r) p.values[r * F + j] = m.at(r, perm[j]);
    }
    const auto got = feature_importances(fit_forest(p, c));
    for (std::size_t j = 0; j < F; ++j) EXPECT_NEAR(got[j], base[perm[j]], 1e-12) << "column " << j;
}

TEST(Importance, GainTiesGoToLowerFeatureIndex) {
    FeatureMatrix m = informative_matrix(60, 3, 2);
    for (std::size_t r = 0; r < m.rows; ++r) m.values[r * 3 + 2] = m.at(r, 0);  // duplicate column
    ForestConfig c;
    c.n_trees = 5;
    c.features_per_split = 3;
    const auto imp = feature_importances(fit_forest(m, c));
    EXPECT_GT(imp[0], 0.0);
    EXPECT_EQ(imp[2], 0.0);
}

// ---------------------------------------------------------------------------
// Tukey summaries and aggregation
// ---------------------------------------------------------------------------

TEST(Tukey, Examples) {
    const auto a = tukey_quartiles(std::vector<double>{1, 2, 3, 4, 5});
    EXPECT_EQ(a.min, 1);
    EXPECT_EQ(a.lower_hinge, 1);
    EXPECT_EQ(a.median, 3);
    EXPECT_EQ(a.upper_hinge, 4);
    EXPECT_EQ(a.max, 5);
    const auto b = tukey_quartiles(std::vector<double>{1, 2, 3, 4});
    EXPECT_EQ(b.median, 2);
    EXPECT_EQ(b.lower_hinge, 1);
    EXPECT_EQ(b.upper_hinge, 3);
    const auto c = tukey_quartiles(std::vector<double>{0.7});
    for (double v : {c.min, c.lower_hinge, c.median, c.upper_hinge, c.max}) EXPECT_EQ(v, 0.7);
    EXPECT_EQ(c.count, 1u);
    EXPECT_THROW(tukey_quartiles(std::vector<double>{}), EmptyGroup);
}

TEST(Tukey, OrderedAndPermutationInvariant) {
    std::mt19937_64 rng(5);
    for (int n = 1; n < 40; ++n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) x = static_cast<double>(rng() % 1000) / 10.0;
        const auto q = tukey_quartiles(v);
        EXPECT_LE(q.min, q.lower_hinge);
        EXPECT_LE(q.lower_hinge, q.median);
        EXPECT_LE(q.median, q.upper_hinge);
        EXPECT_LE(q.upper_hinge, q.max);
        for (int t = 0; t < 5; ++t) {
            std::shuffle(v.begin(), v.end(), rng);
            const auto s = tukey_quartiles(v);
            EXPECT_EQ(s.median, q.median);
            EXPECT_EQ(s.lower_hinge, q.lower_hinge);
            EXPECT_EQ(s.upper_hinge, q.upper_hinge);
        }
    }
}

namespace {

std::vector<ImageImportance> two_images() {
    const std::vector<std::string> names{"HLS_2_mean", "LAB_1_med", "corner_count", "lbp_bin3"};
    return {{"a", 5, names, {0.4, 0.3, 0.2, 0.1}}, {"b", 5, names, {0.5, 0.1, 0.1, 0.3}},
            {"a", 25, names, {0.1, 0.6, 0.2, 0.1}}};
}

}  // namespace

TEST(Aggregate, ByKsizePoolsImages) {
    const auto s = aggregate_importances(two_images(), GroupBy::ksize);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].group, "k5");
    EXPECT_EQ(s[0].count, 8u);
    EXPECT_EQ(s[0].max, 0.5);
    EXPECT_EQ(s[1].group, "k25");
    EXPECT_EQ(s[1].count, 4u);
    EXPECT_EQ(s[1].median, 0.1);  // sorted 0.1 0.1 0.2 0.6, lower-middle
}

TEST(Aggregate, FamilyGroupsPartitionTheSchema) {
    const auto s = aggregate_importances(two_images(), GroupBy::family);
    std::size_t total = 0;
    for (const auto& q : s) total += q.count;
    EXPECT_EQ(total, 12u);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].group, "color");
    EXPECT_EQ(s[0].count, 6u);

    const auto names = color::feature_names(color::ColorFeatureSpec{});
    std::size_t color_count = 0;
    for (const auto& n : names) color_count += family_of(n) == Family::color;
    EXPECT_EQ(color_count, names.size());
}

TEST(Aggregate, SingleImageCollapsesToPoints) {
    const std::vector<ImageImportance> one{{"a", 5, {"x_mean", "corner_count"}, {0.25, 0.75}}};
    for (const auto& q : aggregate_importances(one, GroupBy::feature)) {
        EXPECT_EQ(q.min, q.max);
        EXPECT_EQ(q.median, q.min);
    }
    EXPECT_THROW(aggregate_importances({}, GroupBy::ksize), EmptyGroup);
}

TEST(Rank, SortedByMedianThenName) {
    const auto r = rank_features(two_images(), 5);
    ASSERT_EQ(r.size(), 4u);
    // medians over 3 images: HLS 0.4, LAB 0.3, corner 0.2, lbp 0.1
    EXPECT_EQ(r[0].name, "HLS_2_mean");
    EXPECT_EQ(r[1].name, "LAB_1_med");
    EXPECT_EQ(r[2].name, "corner_count");
    EXPECT_EQ(r[2].family, Family::shape);
    EXPECT_EQ(r[3].name, "lbp_bin3");
    EXPECT_EQ(rank_features(two_images(), 2).size(), 2u);

    const std::vector<ImageImportance> tie{{"a", 5, {"zeta_mean", "alpha_mean"}, {0.5, 0.5}}};
    const auto t = rank_features(tie, 5);
    EXPECT_EQ(t[0].name, "alpha_mean");
    EXPECT_EQ(t[1].name, "zeta_mean");
}
