// Serial reference vs OpenMP kernels. The second argument of each parallel
// case is the worker count.
#include <random>

#include <benchmark/benchmark.h>

#include "pcbfeat/color.hpp"
#include "pcbfeat/kernels.hpp"
#include "pcbfeat/pipeline.hpp"
#include "pcbfeat/selection.hpp"
#include "pcbfeat/shape.hpp"
#include "pcbfeat/texture.hpp"

using namespace pcbfeat;

namespace {

ImageU8 random_rgb(int side) {
    std::mt19937_64 rng(1);
    ImageU8 img(side, side, 3);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

const ImageU8& board() {
    static const ImageU8 img = pipeline::synth_board(pipeline::SyntheticBoardSpec{}).image;
    return img;
}

// Restores the worker count when the benchmark case ends.
class Workers {
public:
    explicit Workers(std::int64_t n) : previous_(set_worker_count(static_cast<int>(n))) {}
    ~Workers() { set_worker_count(previous_); }
    Workers(const Workers&) = delete;
    Workers& operator=(const Workers&) = delete;

private:
    int previous_;
};

Exec exec_for(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_Correlate(benchmark::State& state) {
    const ImageF gray = to_gray_f32(random_rgb(static_cast<int>(state.range(0))));
    const Kernel2D k = texture::gabor_kernel(texture::GaborParams{}, 30.0);
    Workers w(std::max<std::int64_t>(1, state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(state.range(1) == 0 ? kernels::correlate_reference(gray, k)
                                                     : kernels::correlate(gray, k));
    }
}

void BM_ColorConvert(benchmark::State& state) {
    const ImageU8 rgb = random_rgb(static_cast<int>(state.range(0)));
    Workers w(std::max<std::int64_t>(1, state.range(1)));
    for (auto _ : state) {
        for (auto s : color::all_spaces) benchmark::DoNotOptimize(color::convert_color_space(rgb, s, exec_for(state)));
    }
}

void BM_ShapeExtract(benchmark::State& state) {
    const ImageF gray = to_gray_f32(board());
    const RegionGrid grid = build_region_grid(gray.width(), gray.height(), static_cast<int>(state.range(0)));
    Workers w(std::max<std::int64_t>(1, state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(shape::extract_features(gray, grid, exec_for(state)));
}

void BM_TextureExtract(benchmark::State& state) {
    const ImageU8 g8 = to_gray_u8(board());
    const ImageF gf = to_gray_f32(board());
    const RegionGrid grid = build_region_grid(gf.width(), gf.height(), static_cast<int>(state.range(0)));
    Workers w(std::max<std::int64_t>(1, state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(texture::extract_features(g8, gf, grid, texture::TextureSpec{}, exec_for(state)));
}

void BM_Forest(benchmark::State& state) {
    selection::FeatureMatrix m;
    const std::size_t rows = static_cast<std::size_t>(state.range(0)), cols = 40;
    for (std::size_t c = 0; c < cols; ++c) m.feature_names.push_back("f" + std::to_string(c));
    m.rows = rows;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    m.values.resize(rows * cols);
    for (double& v : m.values) v = u(rng);
    for (std::size_t r = 0; r < rows; ++r) m.labels.push_back(m.values[r * cols] + 0.2 * u(rng) > 0.6 ? 8 : 1);
    Workers w(std::max<std::int64_t>(1, state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(selection::fit_forest(m, selection::ForestConfig{}, exec_for(state)));
}

// range(1) == 0 selects the serial reference.
void worker_sweep(benchmark::internal::Benchmark* b, std::int64_t size) {
    for (std::int64_t w : {0, 1, 2, 4, 8}) b->Args({size, w});
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_Correlate)->Apply([](auto* b) { worker_sweep(b, 256); });
BENCHMARK(BM_ColorConvert)->Apply([](auto* b) { worker_sweep(b, 256); });
BENCHMARK(BM_ShapeExtract)->Apply([](auto* b) { worker_sweep(b, 25); });
BENCHMARK(BM_TextureExtract)->Apply([](auto* b) { worker_sweep(b, 10); });
BENCHMARK(BM_Forest)->Apply([](auto* b) { worker_sweep(b, 400); });

BENCHMARK_MAIN();
