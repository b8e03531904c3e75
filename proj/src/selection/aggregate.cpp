#include <algorithm>
#include <map>

#include "pcbfeat/error.hpp"
#include "pcbfeat/selection.hpp"

namespace pcbfeat::selection {
namespace {

// Lower-middle median of a sorted range; `fallback` for an empty range.
double sorted_median(std::span<const double> sorted, double fallback) {
    return sorted.empty() ? fallback : sorted[(sorted.size() - 1) / 2];
}

}  // namespace

QuartileSummary tukey_quartiles(std::span<const double> values, std::string group) {
    if (values.empty()) throw EmptyGroup("no values for group '" + group + "'");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t m = (v.size() - 1) / 2;
    const std::span<const double> all(v);
    QuartileSummary q;
    q.group = std::move(group);
    q.count = v.size();
    q.min = v.front();
    q.max = v.back();
    q.median = v[m];
    q.lower_hinge = sorted_median(all.first(m), q.median);
    q.upper_hinge = sorted_median(all.subspan(m + 1), q.median);
    return q;
}

std::vector<QuartileSummary> aggregate_importances(const std::vector<ImageImportance>& per_image, GroupBy group_by) {
    if (per_image.empty()) throw EmptyGroup("no per-image importances to aggregate");
    std::vector<QuartileSummary> out;
    switch (group_by) {
        case GroupBy::ksize: {
            std::map<int, std::vector<double>> pools;
            for (const auto& im : per_image) {
                auto& p = pools[im.ksize];
                p.insert(p.end(), im.importance.begin(), im.importance.end());
            }
            for (const auto& [k, vals] : pools) out.push_back(tukey_quartiles(vals, "k" + std::to_string(k)));
            break;
        }
        case GroupBy::family: {
            std::map<Family, std::vector<double>> pools;
            for (const auto& im : per_image) {
                for (std::size_t i = 0; i < im.feature_names.size(); ++i) {
                    pools[family_of(im.feature_names[i])].push_back(im.importance[i]);
                }
            }
            for (const auto& [f, vals] : pools) out.push_back(tukey_quartiles(vals, std::string(family_name(f))));
            break;
        }
        case GroupBy::feature: {
            std::map<std::string, std::vector<double>> pools;
            for (const auto& im : per_image) {
                for (std::size_t i = 0; i < im.feature_names.size(); ++i) {
                    pools[im.feature_names[i]].push_back(im.importance[i]);
                }
            }
            for (const auto& [name, vals] : pools) out.push_back(tukey_quartiles(vals, name));
            break;
        }
    }
    return out;
}

std::vector<RankedFeature> rank_features(const std::vector<ImageImportance>& per_image, std::size_t top_k) {
    std::vector<RankedFeature> ranked;
    for (auto& q : aggregate_importances(per_image, GroupBy::feature)) {
        const Family fam = family_of(q.group);
        std::string name = q.group;
        ranked.push_back({std::move(name), fam, std::move(q)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
        if (a.summary.median != b.summary.median) return a.summary.median > b.summary.median;
        return a.name < b.name;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    return ranked;
}

}  // namespace pcbfeat::selection
