#include <chrono>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "pcbfeat/pipeline.hpp"
#include "pcbfeat/shape.hpp"

namespace pcbfeat::pipeline {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class ScopedTimer {
public:
    ScopedTimer(FamilyTimings* sink, Family f) : sink_(sink), family_(f), start_(Clock::now()) {}
    ~ScopedTimer() {
        if (sink_) (*sink_)[family_] += std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    FamilyTimings* sink_;
    Family family_;
    Clock::time_point start_;
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace

ImageContext prepare_image(ImageU8 rgb, const PipelineConfig& config, Exec exec) {
    ImageContext ctx;
    ctx.gray_u8 = to_gray_u8(rgb);
    ctx.gray = to_gray_f32(rgb);
    if (config.has_family(Family::texture)) ctx.gabor = texture::gabor_responses(ctx.gray, config.texture.gabor, exec);
    ctx.rgb = std::move(rgb);
    return ctx;
}

std::vector<std::string> feature_schema(const PipelineConfig& config) {
    std::vector<std::string> names;
    auto add = [&](std::vector<std::string> v) { names.insert(names.end(), v.begin(), v.end()); };
    if (config.has_family(Family::color)) add(color::feature_names(config.color));
    if (config.has_family(Family::shape)) add(shape::feature_names());
    if (config.has_family(Family::texture)) add(texture::feature_names(config.texture));
    return names;
}

FeatureBlock extract_image_features(const ImageContext& ctx, const RegionGrid& grid, const PipelineConfig& config,
                                    Exec exec, FamilyTimings* timings) {
    FeatureBlock block;
    if (config.has_family(Family::color)) {
        ScopedTimer t(timings, Family::color);
        block.append(color::extract_features(ctx.rgb, grid, config.color, exec));
    }
    if (config.has_family(Family::shape)) {
        ScopedTimer t(timings, Family::shape);
        block.append(shape::extract_features(ctx.gray, grid, exec));
    }
    if (config.has_family(Family::texture)) {
        ScopedTimer t(timings, Family::texture);
        block.append(texture::extract_features(ctx.gray_u8, ctx.gabor, grid, config.texture, exec));
    }
    return block;
}

RunStatus run_extract(const PipelineConfig& config) {
    RunStatus status;
    Dataset dataset;
    try {
        config.validate();
        dataset = load_dataset(config.dataset);
    } catch (const Error& e) {
        status.exit_code = 2;
        status.messages.emplace_back(e.what());
        return status;
    }
    if (dataset.images.empty()) {
        status.exit_code = 2;
        status.messages.emplace_back("no images");
        return status;
    }

    const int previous_workers = set_worker_count(config.workers);
    const fs::path out_dir = config.output_dir;
    fs::create_directories(out_dir / "features");

    FamilyTimings timings;
    json files = json::array();
    json images = json::array();
    for (const auto& entry : dataset.images) {
        json record{{"id", entry.id}};
        try {
            ImageU8 rgb = load_image(entry.image_path);
            const SemanticMask mask = load_mask(entry.mask_path);
            if (mask.width != rgb.width() || mask.height != rgb.height()) {
                throw DimensionMismatch("mask " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                                        " does not match image " + std::to_string(rgb.width()) + "x" +
                                        std::to_string(rgb.height()));
            }
            const ImageContext ctx = prepare_image(std::move(rgb), config, Exec::parallel);
            json produced = json::array();
            for (int k : config.ksizes) {
                const auto t0 = Clock::now();
                const RegionGrid grid = build_region_grid(ctx.rgb.width(), ctx.rgb.height(), k);
                const auto labels = label_regions(grid, mask);
                const FeatureBlock block = extract_image_features(ctx, grid, config, Exec::parallel, &timings);
                const std::string rel = "features/" + entry.id + "_" + std::to_string(k) + ".csv";
                write_feature_csv(out_dir / rel, block, labels);
                produced.push_back({{"image_id", entry.id},
                                    {"ksize", k},
                                    {"path", rel},
                                    {"rows", block.rows},
                                    {"cols", block.cols()}});
                std::cerr << "[extract] " << entry.id << " k=" << k << " regions=" << grid.size() << " ("
                          << std::chrono::duration<double>(Clock::now() - t0).count() << " s)\n";
            }
            for (auto& p : produced) files.push_back(std::move(p));
            record["status"] = "ok";
            ++status.succeeded;
        } catch (const Error& e) {
            record["status"] = "failed";
            record["error"] = e.what();
            status.messages.push_back(entry.id + ": " + e.what());
            std::cerr << "[extract] " << entry.id << " failed: " << e.what() << "\n";
            ++status.failed;
        }
        images.push_back(std::move(record));
    }
    set_worker_count(previous_workers);

    json manifest;
    manifest["tool"] = "pcbfeat";
    manifest["version"] = kToolVersion;
    manifest["config_hash"] = config_hash(config);
    manifest["seed"] = config.seed;
    manifest["config"] = json::parse(config_to_json(config, false));
    manifest["feature_schema"] = feature_schema(config);
    manifest["images"] = std::move(images);
    manifest["feature_files"] = std::move(files);
    write_json(out_dir / "run_manifest.json", manifest);

    json tj;
    for (const auto& [f, secs] : timings) {
        tj[std::string(family_name(f))] = secs;
        std::cerr << "[extract] family " << family_name(f) << ": " << secs << " s\n";
    }
    write_json(out_dir / "timings.json", tj);

    status.exit_code = status.failed == 0 ? 0 : 1;
    return status;
}

}  // namespace pcbfeat::pipeline
