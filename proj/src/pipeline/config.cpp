#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcbfeat/pipeline.hpp"

namespace pcbfeat::pipeline {
namespace {

using json = nlohmann::ordered_json;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

template <typename T>
void read_opt(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

Dataset load_dataset(const fs::path& manifest) {
    json j;
    try {
        j = json::parse(read_text(manifest));
    } catch (const json::exception& e) {
        throw ConfigError("malformed dataset manifest " + manifest.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("images") || !j["images"].is_array()) {
        throw ConfigError("dataset manifest needs an 'images' array");
    }
    const fs::path base = manifest.parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path : base / path;
    };
    Dataset ds;
    for (const auto& e : j["images"]) {
        try {
            DatasetEntry entry;
            entry.id = e.at("id").get<std::string>();
            entry.image_path = resolve(e.at("image_path").get<std::string>());
            entry.mask_path = resolve(e.at("mask_path").get<std::string>());
            read_opt(e, "board_id", entry.board_id);
            read_opt(e, "side", entry.side);
            ds.images.push_back(std::move(entry));
        } catch (const json::exception& ex) {
            throw ConfigError(std::string("bad dataset entry: ") + ex.what());
        }
    }
    return ds;
}

void save_dataset(const fs::path& manifest, const Dataset& dataset) {
    json images = json::array();
    const fs::path base = manifest.parent_path();
    for (const auto& e : dataset.images) {
        json item;
        item["id"] = e.id;
        item["image_path"] = e.image_path.lexically_relative(base.empty() ? "." : base).generic_string();
        item["mask_path"] = e.mask_path.lexically_relative(base.empty() ? "." : base).generic_string();
        if (!e.board_id.empty()) item["board_id"] = e.board_id;
        if (!e.side.empty()) item["side"] = e.side;
        images.push_back(std::move(item));
    }
    write_text(manifest, json{{"images", images}}.dump(2) + "\n");
}

void PipelineConfig::validate() const {
    if (ksizes.empty()) throw ConfigError("ksizes must not be empty");
    for (int k : ksizes)
        if (k < 1) throw ConfigError("ksize must be >= 1");
    if (families.empty()) throw ConfigError("at least one feature family must be enabled");
    if (has_family(Family::color) && (color.spaces.empty() || color.stats.empty())) {
        throw ConfigError("colour family needs at least one space and one stat");
    }
    texture.gabor.validate();
    texture.glcm.validate();
    forest.validate();
    if (top_k == 0) throw ConfigError("top_k must be >= 1");
}

bool PipelineConfig::has_family(Family f) const {
    return std::find(families.begin(), families.end(), f) != families.end();
}

std::string config_to_json(const PipelineConfig& c, bool include_workers) {
    json j;
    j["dataset"] = c.dataset.generic_string();
    j["ksizes"] = c.ksizes;
    json fams = json::array();
    for (auto f : c.families) fams.push_back(std::string(family_name(f)));
    j["families"] = fams;

    json spaces = json::array();
    for (auto s : c.color.spaces) spaces.push_back(std::string(color::space_name(s)));
    json stats = json::array();
    for (auto s : c.color.stats) stats.push_back(s == color::ColorStat::mean ? "mean" : "median");
    j["color"] = {{"spaces", spaces}, {"stats", stats}};

    const auto& g = c.texture.gabor;
    j["texture"] = {
        {"gabor",
         {{"lambda", g.lambda}, {"psi", g.psi}, {"sigma", g.sigma}, {"gamma", g.gamma}, {"thetas", g.thetas},
          {"kernel_extent", g.kernel_extent}}},
        {"glcm",
         {{"distances", c.texture.glcm.distances},
          {"angles", c.texture.glcm.angles},
          {"levels", c.texture.glcm.levels},
          {"symmetric", c.texture.glcm.symmetric},
          {"normalize", c.texture.glcm.normalize}}}};

    const auto& f = c.forest;
    j["forest"] = {{"n_trees", f.n_trees},
                   {"max_depth", f.max_depth},
                   {"min_samples_split", f.min_samples_split},
                   {"features_per_split", f.features_per_split},
                   {"bootstrap", f.bootstrap},
                   {"target", f.target == selection::TargetRule::binary ? "binary" : "deciles"},
                   {"positive_decile", f.positive_decile}};
    j["output_dir"] = c.output_dir.generic_string();
    j["seed"] = c.seed;
    if (include_workers) j["workers"] = c.workers;
    j["top_k"] = c.top_k;
    return j.dump(2);
}

PipelineConfig config_from_json(const std::string& text) {
    PipelineConfig c;
    try {
        const json j = json::parse(text);
        if (j.contains("dataset")) c.dataset = j["dataset"].get<std::string>();
        read_opt(j, "ksizes", c.ksizes);
        if (j.contains("families")) {
            c.families.clear();
            for (const auto& f : j["families"]) c.families.push_back(parse_family(f.get<std::string>()));
        }
        if (j.contains("color")) {
            const auto& cj = j["color"];
            if (cj.contains("spaces")) {
                c.color.spaces.clear();
                for (const auto& s : cj["spaces"]) c.color.spaces.push_back(color::parse_space(s.get<std::string>()));
            }
            if (cj.contains("stats")) {
                c.color.stats.clear();
                for (const auto& s : cj["stats"]) {
                    const auto name = s.get<std::string>();
                    if (name == "mean") c.color.stats.push_back(color::ColorStat::mean);
                    else if (name == "median" || name == "med") c.color.stats.push_back(color::ColorStat::median);
                    else throw ConfigError("unknown colour stat '" + name + "'");
                }
            }
        }
        if (j.contains("texture")) {
            const auto& tj = j["texture"];
            if (tj.contains("gabor")) {
                const auto& gj = tj["gabor"];
                auto& g = c.texture.gabor;
                read_opt(gj, "lambda", g.lambda);
                read_opt(gj, "psi", g.psi);
                read_opt(gj, "sigma", g.sigma);
                read_opt(gj, "gamma", g.gamma);
                read_opt(gj, "thetas", g.thetas);
                read_opt(gj, "kernel_extent", g.kernel_extent);
            }
            if (tj.contains("glcm")) {
                const auto& lj = tj["glcm"];
                auto& l = c.texture.glcm;
                read_opt(lj, "distances", l.distances);
                read_opt(lj, "angles", l.angles);
                read_opt(lj, "levels", l.levels);
                read_opt(lj, "symmetric", l.symmetric);
                read_opt(lj, "normalize", l.normalize);
            }
        }
        if (j.contains("forest")) {
            const auto& fj = j["forest"];
            auto& f = c.forest;
            read_opt(fj, "n_trees", f.n_trees);
            read_opt(fj, "max_depth", f.max_depth);
            read_opt(fj, "min_samples_split", f.min_samples_split);
            read_opt(fj, "features_per_split", f.features_per_split);
            read_opt(fj, "bootstrap", f.bootstrap);
            read_opt(fj, "positive_decile", f.positive_decile);
            if (fj.contains("target")) {
                const auto t = fj["target"].get<std::string>();
                if (t == "binary") f.target = selection::TargetRule::binary;
                else if (t == "deciles") f.target = selection::TargetRule::deciles;
                else throw ConfigError("unknown target rule '" + t + "'");
            }
        }
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        read_opt(j, "seed", c.seed);
        read_opt(j, "workers", c.workers);
        read_opt(j, "top_k", c.top_k);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const UnsupportedSpace& e) {
        throw ConfigError(e.what());
    }
    c.forest.seed = c.seed;
    return c;
}

PipelineConfig load_config(const fs::path& path) { return config_from_json(read_text(path)); }

void save_config(const fs::path& path, const PipelineConfig& config) {
    write_text(path, config_to_json(config) + "\n");
}

std::string config_hash(const PipelineConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : config_to_json(config, false)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pcbfeat::pipeline
