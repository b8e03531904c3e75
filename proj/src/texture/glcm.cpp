#include <cmath>
#include <numbers>

#include "pcbfeat/stats.hpp"
#include "pcbfeat/texture.hpp"

namespace pcbfeat::texture {

void GlcmSpec::validate() const {
    if (levels < 2 || levels > 256) throw InvalidParams("glcm levels must be in [2, 256]");
    if (distances.empty() || angles.empty()) throw InvalidParams("glcm needs distances and angles");
    for (int d : distances)
        if (d < 1) throw InvalidParams("glcm distance must be >= 1");
}

PixelOffset angle_offset(int angle_deg, int distance) {
    const double a = angle_deg * std::numbers::pi / 180.0;
    return {static_cast<int>(std::lround(std::cos(a) * distance)),
            static_cast<int>(std::lround(std::sin(a) * distance))};
}

ImageU8 quantize(const ImageU8& gray, int levels) {
    ImageU8 out(gray.width(), gray.height(), 1);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        out.data()[i] = static_cast<std::uint8_t>(gray.data()[i] * levels / 256);
    }
    return out;
}

GlcmMatrix glcm_from_levels(const ImageU8& block, int levels, PixelOffset off, bool symmetric, bool normalize) {
    GlcmMatrix m{levels, std::max(std::abs(off.dx), std::abs(off.dy)), 0,
                 std::vector<double>(static_cast<std::size_t>(levels) * levels, 0.0)};
    const int w = block.width(), h = block.height();
    const int x_lo = std::max(0, -off.dx), x_hi = std::min(w, w - off.dx);
    const int y_lo = std::max(0, -off.dy), y_hi = std::min(h, h - off.dy);
    std::size_t pairs = 0;
    for (int y = y_lo; y < y_hi; ++y) {
        auto ref = block.row(y);
        auto nb = block.row(y + off.dy);
        for (int x = x_lo; x < x_hi; ++x) {
            const int i = ref[x], j = nb[x + off.dx];
            if (i >= levels || j >= levels) throw InvalidParams("glcm level out of range");
            m.p[static_cast<std::size_t>(i) * levels + j] += 1.0;
            ++pairs;
        }
    }
    if (pairs == 0) throw DegenerateRegion("no pixel pairs for offset (" + std::to_string(off.dx) + "," +
                                           std::to_string(off.dy) + ")");
    if (symmetric) {
        for (int i = 0; i < levels; ++i) {
            for (int j = i + 1; j < levels; ++j) {
                const double s = m.at(i, j) + m.at(j, i);
                m.p[static_cast<std::size_t>(i) * levels + j] = s;
                m.p[static_cast<std::size_t>(j) * levels + i] = s;
            }
            m.p[static_cast<std::size_t>(i) * levels + i] *= 2.0;
        }
    }
    if (normalize) {
        double total = 0.0;
        for (double v : m.p) total += v;
        for (double& v : m.p) v /= total;
    }
    return m;
}

std::vector<GlcmMatrix> glcm(const ImageU8& gray_block, const GlcmSpec& spec) {
    spec.validate();
    const ImageU8 q = quantize(gray_block, spec.levels);
    std::vector<GlcmMatrix> out;
    for (int d : spec.distances) {
        for (int a : spec.angles) {
            GlcmMatrix m = glcm_from_levels(q, spec.levels, angle_offset(a, d), spec.symmetric, spec.normalize);
            m.distance = d;
            m.angle = a;
            out.push_back(std::move(m));
        }
    }
    return out;
}

GlcmProperties glcm_properties(const GlcmMatrix& m) {
    GlcmProperties p;
    for (int i = 0; i < m.levels; ++i) {
        for (int j = 0; j < m.levels; ++j) {
            const double v = m.at(i, j);
            if (v == 0.0) continue;
            const double d = i - j;
            p.asm_ += v * v;
            p.contrast += v * d * d;
            p.dissimilarity += v * std::fabs(d);
            p.homogeneity += v / (1.0 + d * d);
            p.entropy -= v * std::log(v);
        }
    }
    p.energy = std::sqrt(p.asm_);
    return p;
}

std::vector<std::string> glcm_feature_names(const GlcmSpec& spec) {
    static constexpr const char* props[] = {"asm", "contrast", "dissimilarity", "energy", "entropy", "homogeneity"};
    const bool tag_distance = spec.distances.size() > 1 || spec.distances.front() != 1;
    std::vector<std::string> names;
    for (int d : spec.distances) {
        for (int a : spec.angles) {
            const std::string prefix =
                "glcm_" + (tag_distance ? "d" + std::to_string(d) + "_" : std::string()) + "a" + std::to_string(a) + "_";
            for (const char* p : props) names.push_back(prefix + p);
        }
    }
    return names;
}

void glcm_region_features(const ImageU8& gray_block, const GlcmSpec& spec, std::span<double> out, bool* degenerate) {
    spec.validate();
    const ImageU8 q = quantize(gray_block, spec.levels);
    std::size_t k = 0;
    for (int d : spec.distances) {
        for (int a : spec.angles) {
            GlcmProperties p;
            try {
                p = glcm_properties(glcm_from_levels(q, spec.levels, angle_offset(a, d), spec.symmetric, true));
            } catch (const DegenerateRegion&) {
                if (degenerate) *degenerate = true;
            }
            for (double v : {p.asm_, p.contrast, p.dissimilarity, p.energy, p.entropy, p.homogeneity}) out[k++] = v;
        }
    }
}

}  // namespace pcbfeat::texture
