#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pcbfeat/pipeline.hpp"

namespace pcbfeat::pipeline {
namespace {

using json = nlohmann::ordered_json;

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("malformed " + path.string() + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

json summary_json(const selection::QuartileSummary& q) {
    return {{"count", q.count},
            {"min", q.min},
            {"lower_hinge", q.lower_hinge},
            {"median", q.median},
            {"upper_hinge", q.upper_hinge},
            {"max", q.max}};
}

json summaries_by_key(const std::vector<selection::QuartileSummary>& qs, const std::string& prefix = {}) {
    json j = json::object();
    for (const auto& q : qs) j[prefix + q.group] = summary_json(q);
    return j;
}

std::string ksize_key(int k) { return "k" + std::to_string(k); }

}  // namespace

RunStatus run_rank(const PipelineConfig& config) {
    RunStatus status;
    const fs::path out_dir = config.output_dir;
    json manifest;
    try {
        config.validate();
        manifest = read_json(out_dir / "run_manifest.json");
        if (!manifest.contains("feature_files") || !manifest["feature_files"].is_array()) {
            throw ConfigError("run manifest lists no feature files");
        }
    } catch (const Error& e) {
        status.exit_code = 2;
        status.messages.emplace_back(e.what());
        return status;
    }
    if (manifest["feature_files"].empty()) {
        status.exit_code = 2;
        status.messages.emplace_back("no feature files to rank");
        return status;
    }

    selection::ForestConfig forest = config.forest;
    forest.seed = config.seed;
    const int previous_workers = set_worker_count(config.workers);

    std::vector<selection::ImageImportance> results;
    json excluded = json::array();
    for (const auto& f : manifest["feature_files"]) {
        const std::string image_id = f.at("image_id").get<std::string>();
        const int ksize = f.at("ksize").get<int>();
        try {
            selection::FeatureMatrix m = read_feature_csv(out_dir / f.at("path").get<std::string>());
            m.image_id = image_id;
            m.ksize = ksize;
            const auto model = selection::fit_forest(m, forest, Exec::parallel);
            results.push_back({image_id, ksize, m.feature_names, selection::feature_importances(model)});
            ++status.succeeded;
        } catch (const Error& e) {
            const std::string what = image_id + " k=" + std::to_string(ksize) + ": " + e.what();
            std::cerr << "[rank] warning: excluded " << what << "\n";
            status.messages.push_back(what);
            excluded.push_back({{"image_id", image_id}, {"ksize", ksize}, {"reason", e.what()}});
            ++status.failed;
        }
    }
    set_worker_count(previous_workers);

    std::string csv = "feature_name,family,ksize,image_id,importance\n";
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.feature_names.size(); ++i) {
            csv += r.feature_names[i] + "," + std::string(family_name(family_of(r.feature_names[i]))) + "," +
                   std::to_string(r.ksize) + "," + r.image_id + "," + format_number(r.importance[i]) + "\n";
        }
    }
    write_text(out_dir / "importance.csv", csv);

    std::vector<int> ksizes;
    for (const auto& r : results)
        if (std::find(ksizes.begin(), ksizes.end(), r.ksize) == ksizes.end()) ksizes.push_back(r.ksize);
    std::sort(ksizes.begin(), ksizes.end());

    json by_ksize = json::object();
    json by_family = json::object();
    json top = json::object();
    if (!results.empty()) by_family["all"] = summaries_by_key(selection::aggregate_importances(results, selection::GroupBy::family));
    for (int k : ksizes) {
        std::vector<selection::ImageImportance> subset;
        for (const auto& r : results)
            if (r.ksize == k) subset.push_back(r);
        const auto qs = selection::aggregate_importances(subset, selection::GroupBy::ksize);
        for (const auto& q : qs) by_ksize[ksize_key(k)] = summary_json(q);
        by_family[ksize_key(k)] = summaries_by_key(selection::aggregate_importances(subset, selection::GroupBy::family));
        json ranked = json::array();
        for (const auto& rf : selection::rank_features(subset, config.top_k)) {
            json item{{"feature", rf.name}, {"family", std::string(family_name(rf.family))}};
            item.update(summary_json(rf.summary));
            ranked.push_back(std::move(item));
        }
        top[ksize_key(k)] = std::move(ranked);
    }
    write_text(out_dir / "summary_ksize.json", by_ksize.dump(2) + "\n");
    write_text(out_dir / "summary_family.json", by_family.dump(2) + "\n");
    write_text(out_dir / "top_features.json", top.dump(2) + "\n");

    json rank_manifest;
    rank_manifest["tool"] = "pcbfeat";
    rank_manifest["version"] = kToolVersion;
    rank_manifest["config_hash"] = config_hash(config);
    rank_manifest["seed"] = config.seed;
    rank_manifest["forest"] = json::parse(config_to_json(config, false))["forest"];
    rank_manifest["excluded"] = std::move(excluded);
    write_text(out_dir / "rank_manifest.json", rank_manifest.dump(2) + "\n");

    if (results.empty()) status.exit_code = 1;
    else status.exit_code = status.failed == 0 ? 0 : 1;
    return status;
}

std::string render_report(const fs::path& output_dir) {
    const json by_ksize = read_json(output_dir / "summary_ksize.json");
    const json by_family = read_json(output_dir / "summary_family.json");
    const json top = read_json(output_dir / "top_features.json");

    std::ostringstream os;
    auto row = [&](const std::string& label, const json& q) {
        os << "  " << label;
        for (std::size_t pad = label.size(); pad < 14; ++pad) os << ' ';
        os << " n=" << q["count"].get<std::size_t>() << "  min=" << format_number(q["min"].get<double>())
           << "  q1=" << format_number(q["lower_hinge"].get<double>())
           << "  med=" << format_number(q["median"].get<double>())
           << "  q3=" << format_number(q["upper_hinge"].get<double>())
           << "  max=" << format_number(q["max"].get<double>()) << "\n";
    };

    os << "Importance by ksize\n";
    for (const auto& [k, q] : by_ksize.items()) row(k, q);
    if (by_ksize.size() >= 2) {
        const double first = by_ksize.begin().value()["median"].get<double>();
        const double last = (--by_ksize.end()).value()["median"].get<double>();
        os << "  median " << (--by_ksize.end()).key() << (last >= first ? " >= " : " < ") << by_ksize.begin().key()
           << "\n";
    }
    os << "\nImportance by family\n";
    if (by_family.contains("all"))
        for (const auto& [f, q] : by_family["all"].items()) row(f, q);
    os << "\nTop features\n";
    for (const auto& [k, list] : top.items()) {
        os << "  " << k << ":";
        for (const auto& item : list) {
            os << " " << item["feature"].get<std::string>() << " (" << item["family"].get<std::string>() << ", "
               << format_number(item["median"].get<double>()) << ")";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace pcbfeat::pipeline
