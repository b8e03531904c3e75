#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "pcbfeat/pipeline.hpp"

namespace pcbfeat::pipeline {
namespace {

// Draws only from raw engine output so boards are identical across standard
// libraries.
class BoardRng {
public:
    explicit BoardRng(std::uint64_t seed) : engine_(seed) {}

    int uniform_int(int lo, int hi) {  // inclusive
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

bool overlaps(const ComponentRect& a, const ComponentRect& b, int gap) {
    return a.x0 < b.x0 + b.width + gap && b.x0 < a.x0 + a.width + gap && a.y0 < b.y0 + b.height + gap &&
           b.y0 < a.y0 + a.height + gap;
}

void validate(const SyntheticBoardSpec& s) {
    if (s.width < 1 || s.height < 1) throw InvalidParams("board must be at least 1x1");
    if (s.component_count < 0) throw InvalidParams("component count must be >= 0");
    if (s.component_count > 0) {
        if (s.min_size < 1 || s.max_size < s.min_size) throw InvalidParams("need 1 <= min_size <= max_size");
        if (s.palette.empty()) throw InvalidParams("palette must not be empty");
    }
    if (s.noise_sigma < 0.0) throw InvalidParams("noise sigma must be >= 0");
    if (s.gap < 0) throw InvalidParams("gap must be >= 0");
}

constexpr int kStripePeriod = 6;

}  // namespace

SyntheticBoard synth_board(const SyntheticBoardSpec& spec) {
    validate(spec);
    BoardRng rng(spec.seed);

    std::vector<ComponentRect> placed;
    for (int c = 0; c < spec.component_count; ++c) {
        bool ok = false;
        for (int attempt = 0; attempt < spec.max_attempts && !ok; ++attempt) {
            ComponentRect r;
            r.width = rng.uniform_int(spec.min_size, spec.max_size);
            r.height = rng.uniform_int(spec.min_size, spec.max_size);
            if (r.width > spec.width || r.height > spec.height) continue;
            r.x0 = rng.uniform_int(0, spec.width - r.width);
            r.y0 = rng.uniform_int(0, spec.height - r.height);
            ok = std::none_of(placed.begin(), placed.end(),
                              [&](const ComponentRect& p) { return overlaps(r, p, spec.gap); });
            if (ok) {
                r.color = spec.palette[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(spec.palette.size()) - 1))];
                r.striped = spec.striped;
                placed.push_back(r);
            }
        }
        if (!ok) {
            throw PlacementFailure("could not place component " + std::to_string(c + 1) + " of " +
                                   std::to_string(spec.component_count) + " within " +
                                   std::to_string(spec.max_attempts) + " attempts");
        }
    }

    SyntheticBoard board;
    board.image = ImageU8(spec.width, spec.height, 3);
    board.mask.width = spec.width;
    board.mask.height = spec.height;
    board.mask.data.assign(static_cast<std::size_t>(spec.width) * spec.height, 0);
    std::vector<double> canvas(static_cast<std::size_t>(spec.width) * spec.height * 3);
    for (std::size_t i = 0; i < canvas.size(); ++i) canvas[i] = spec.substrate[i % 3];

    for (const auto& r : placed) {
        for (int y = r.y0; y < r.y0 + r.height; ++y) {
            for (int x = r.x0; x < r.x0 + r.width; ++x) {
                const bool dark = r.striped && ((y - r.y0) % kStripePeriod) < kStripePeriod / 2;
                const std::size_t px = static_cast<std::size_t>(y) * spec.width + x;
                for (int ch = 0; ch < 3; ++ch) canvas[px * 3 + ch] = dark ? r.color[ch] * 0.5 : r.color[ch];
                board.mask.data[px] = 1;
            }
        }
    }

    auto out = board.image.data();
    for (std::size_t i = 0; i < canvas.size(); ++i) {
        const double v = canvas[i] + (spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.normal() : 0.0);
        out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    board.components = std::move(placed);
    return board;
}

fs::path synth_dataset(const fs::path& dir, int count, const SyntheticBoardSpec& spec) {
    if (count < 0) throw InvalidParams("board count must be >= 0");
    fs::create_directories(dir);
    Dataset ds;
    for (int i = 0; i < count; ++i) {
        SyntheticBoardSpec s = spec;
        s.seed = spec.seed + static_cast<std::uint64_t>(i);
        const SyntheticBoard b = synth_board(s);
        char id[32];
        std::snprintf(id, sizeof id, "board_%03d", i);
        DatasetEntry e;
        e.id = id;
        e.image_path = dir / (e.id + ".png");
        e.mask_path = dir / (e.id + "_mask.png");
        save_png(e.image_path, b.image);
        save_mask_png(e.mask_path, b.mask);
        ds.images.push_back(std::move(e));
    }
    const fs::path manifest = dir / "dataset.json";
    save_dataset(manifest, ds);
    return manifest;
}

}  // namespace pcbfeat::pipeline
