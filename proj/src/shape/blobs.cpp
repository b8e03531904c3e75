#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcbfeat/kernels.hpp"
#include "pcbfeat/shape.hpp"

namespace pcbfeat::shape {
namespace {

struct GaussianTaps {
    std::vector<double> g, d1, d2;
};

GaussianTaps gaussian_taps(double sigma) {
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    GaussianTaps t;
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-0.5 * i * i / (sigma * sigma));
        t.g.push_back(v);
        sum += v;
    }
    const double s2 = sigma * sigma;
    for (int i = -r; i <= r; ++i) {
        const double g = t.g[i + r] / sum;
        t.g[i + r] = g;
        t.d1.push_back(-i / s2 * g);
        t.d2.push_back((i * i / s2 - 1.0) / s2 * g);
    }
    return t;
}

}  // namespace

BlobParams BlobParams::for_ksize(int ksize) {
    BlobParams p;
    p.max_sigma = std::max(1.0, ksize / 2.0);
    return p;
}

void BlobParams::validate() const {
    if (!(min_sigma > 0.0) || max_sigma < min_sigma) throw InvalidParams("need 0 < min_sigma <= max_sigma");
    if (num_sigma < 1) throw InvalidParams("num_sigma must be >= 1");
    if (overlap < 0.0 || overlap > 1.0) throw InvalidParams("overlap must be in [0,1]");
}

std::vector<double> BlobParams::sigmas() const {
    std::vector<double> s;
    if (num_sigma == 1) return {min_sigma};
    for (int i = 0; i < num_sigma; ++i) {
        const double t = static_cast<double>(i) / (num_sigma - 1);
        if (log_scale) {
            s.push_back(std::exp(std::log(min_sigma) + t * (std::log(max_sigma) - std::log(min_sigma))));
        } else {
            s.push_back(min_sigma + t * (max_sigma - min_sigma));
        }
    }
    return s;
}

ImageF hessian_determinant(const ImageF& gray, double sigma) {
    const GaussianTaps t = gaussian_taps(sigma);
    const ImageF lxx = kernels::correlate_separable(gray, t.d2, t.g);
    const ImageF lyy = kernels::correlate_separable(gray, t.g, t.d2);
    const ImageF lxy = kernels::correlate_separable(gray, t.d1, t.d1);
    ImageF out(gray.width(), gray.height(), 1);
    const double s4 = sigma * sigma * sigma * sigma;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double xx = lxx.data()[i], yy = lyy.data()[i], xy = lxy.data()[i];
        out.data()[i] = static_cast<float>(s4 * (xx * yy - xy * xy));
    }
    return out;
}

double blob_overlap(const Blob& a, const Blob& b) {
    const double r1 = a.sigma * std::numbers::sqrt2;
    const double r2 = b.sigma * std::numbers::sqrt2;
    const double d = std::hypot(a.x - b.x, a.y - b.y);
    if (d >= r1 + r2) return 0.0;
    if (d <= std::fabs(r1 - r2)) return 1.0;
    const double c1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0, 1.0);
    const double c2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0, 1.0);
    const double lens = r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) -
                        0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
    const double rmin = std::min(r1, r2);
    return lens / (std::numbers::pi * rmin * rmin);
}

std::vector<Blob> doh_blobs(const ImageF& gray, const BlobParams& params) {
    params.validate();
    const int w = gray.width();
    const int h = gray.height();
    const std::vector<double> sigmas = params.sigmas();
    const int ns = static_cast<int>(sigmas.size());
    std::vector<ImageF> cube;
    cube.reserve(sigmas.size());
    for (double s : sigmas) cube.push_back(hessian_determinant(gray, s));

    // Linear index breaks ties on plateaus so each flat maximum yields one peak.
    auto idx = [&](int x, int y, int s) { return (static_cast<long>(s) * h + y) * w + x; };
    std::vector<Blob> blobs;
    for (int s = 0; s < ns; ++s) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = cube[s].at(x, y);
                if (!(v > params.threshold)) continue;
                bool peak = true;
                for (int ds = -1; ds <= 1 && peak; ++ds) {
                    const int ss = s + ds;
                    if (ss < 0 || ss >= ns) continue;
                    for (int dy = -1; dy <= 1 && peak; ++dy) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= h) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= w || (dx == 0 && dy == 0 && ds == 0)) continue;
                            const double n = cube[ss].at(xx, yy);
                            if (n > v || (n == v && idx(xx, yy, ss) < idx(x, y, s))) {
                                peak = false;
                                break;
                            }
                        }
                    }
                }
                if (peak) blobs.push_back({static_cast<double>(x), static_cast<double>(y), sigmas[s], v});
            }
        }
    }

    std::stable_sort(blobs.begin(), blobs.end(),
                     [](const Blob& a, const Blob& b) { return a.response > b.response; });
    std::vector<bool> dead(blobs.size(), false);
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = i + 1; j < blobs.size(); ++j) {
            if (dead[j] || blob_overlap(blobs[i], blobs[j]) <= params.overlap) continue;
            if (blobs[j].sigma > blobs[i].sigma) {
                dead[i] = true;
                break;
            }
            dead[j] = true;
        }
    }
    std::vector<Blob> kept;
    for (std::size_t i = 0; i < blobs.size(); ++i)
        if (!dead[i]) kept.push_back(blobs[i]);
    return kept;
}

}  // namespace pcbfeat::shape
