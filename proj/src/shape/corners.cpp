#include <algorithm>
#include <cmath>
#include <vector>

#include "pcbfeat/shape.hpp"

namespace pcbfeat::shape {
namespace {

// Bilinear sample with replicated borders.
double sample(const ImageF& img, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double ax = x - fx;
    const double ay = y - fy;
    auto px = [&](int xi, int yi) {
        xi = std::clamp(xi, 0, img.width() - 1);
        yi = std::clamp(yi, 0, img.height() - 1);
        return static_cast<double>(img.at(xi, yi));
    };
    const int x0 = static_cast<int>(fx);
    const int y0 = static_cast<int>(fy);
    return (1 - ay) * ((1 - ax) * px(x0, y0) + ax * px(x0 + 1, y0)) +
           ay * ((1 - ax) * px(x0, y0 + 1) + ax * px(x0 + 1, y0 + 1));
}

}  // namespace

CornerParams CornerParams::for_ksize(int ksize) {
    CornerParams p;
    p.max_corners = ksize;
    p.min_distance = std::max(1, ksize / 5);
    return p;
}

void CornerParams::validate() const {
    if (!(quality_level > 0.0 && quality_level < 1.0)) throw InvalidParams("quality_level must be in (0,1)");
    if (min_distance < 1.0) throw InvalidParams("min_distance must be >= 1");
    if (block_size < 3 || block_size % 2 == 0) throw InvalidParams("block_size must be odd and >= 3");
    if (refine_window < 1) throw InvalidParams("refine_window must be >= 1");
    if (refine_zero_zone >= refine_window) throw InvalidParams("refine_zero_zone must be < refine_window");
}

std::pair<ImageF, ImageF> sobel(const ImageF& gray, Border border) {
    const int w = gray.width();
    const int h = gray.height();
    auto at_border = [border](int i, int n) {
        return border == Border::replicate ? std::clamp(i, 0, n - 1) : reflect101(i, n);
    };
    ImageF gx(w, h, 1);
    ImageF gy(w, h, 1);
    for (int y = 0; y < h; ++y) {
        const int ym = at_border(y - 1, h);
        const int yp = at_border(y + 1, h);
        for (int x = 0; x < w; ++x) {
            const int xm = at_border(x - 1, w);
            const int xp = at_border(x + 1, w);
            const double a = gray.at(xm, ym), b = gray.at(x, ym), c = gray.at(xp, ym);
            const double d = gray.at(xm, y), f = gray.at(xp, y);
            const double g = gray.at(xm, yp), hh = gray.at(x, yp), i = gray.at(xp, yp);
            gx.at(x, y) = static_cast<float>((c + 2 * f + i) - (a + 2 * d + g));
            gy.at(x, y) = static_cast<float>((g + 2 * hh + i) - (a + 2 * b + c));
        }
    }
    return {std::move(gx), std::move(gy)};
}

StructureTensor structure_tensor(const ImageF& gray, int block_size) {
    const auto [gx, gy] = sobel(gray);
    const int w = gray.width();
    const int h = gray.height();
    const int r = block_size / 2;
    StructureTensor t{ImageF(w, h, 1), ImageF(w, h, 1), ImageF(w, h, 1)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sxx = 0, sxy = 0, syy = 0;
            for (int j = -r; j <= r; ++j) {
                const int yy = reflect101(y + j, h);
                for (int i = -r; i <= r; ++i) {
                    const int xx = reflect101(x + i, w);
                    const double dx = gx.at(xx, yy);
                    const double dy = gy.at(xx, yy);
                    sxx += dx * dx;
                    sxy += dx * dy;
                    syy += dy * dy;
                }
            }
            t.xx.at(x, y) = static_cast<float>(sxx);
            t.xy.at(x, y) = static_cast<float>(sxy);
            t.yy.at(x, y) = static_cast<float>(syy);
        }
    }
    return t;
}

std::pair<double, double> symmetric_eigenvalues(double a, double b, double c) {
    const double half_trace = 0.5 * (a + c);
    const double half_diff = 0.5 * (a - c);
    const double root = std::sqrt(half_diff * half_diff + b * b);
    return {half_trace + root, half_trace - root};
}

ImageF structure_tensor_response(const ImageF& gray, int block_size, CornerScore score, double harris_k) {
    const StructureTensor t = structure_tensor(gray, block_size);
    ImageF out(gray.width(), gray.height(), 1);
    auto xx = t.xx.data(), xy = t.xy.data(), yy = t.yy.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double a = xx[i], b = xy[i], c = yy[i];
        if (score == CornerScore::shi_tomasi) {
            dst[i] = static_cast<float>(symmetric_eigenvalues(a, b, c).second);
        } else {
            const double tr = a + c;
            dst[i] = static_cast<float>(a * c - b * b - harris_k * tr * tr);
        }
    }
    return out;
}

Corner refine_corner(const ImageF& gray, Corner initial, const CornerParams& params) {
    const int win = params.refine_window;
    const int side = 2 * win + 1;
    std::vector<double> mask(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < side; ++i) {
        const double v = static_cast<double>(i - win) / win;
        const double wy = std::exp(-v * v);
        for (int j = 0; j < side; ++j) {
            const double u = static_cast<double>(j - win) / win;
            mask[static_cast<std::size_t>(i) * side + j] = wy * std::exp(-u * u);
        }
    }
    if (params.refine_zero_zone >= 0) {
        const int z = params.refine_zero_zone;
        for (int i = win - z; i <= win + z; ++i)
            for (int j = win - z; j <= win + z; ++j) mask[static_cast<std::size_t>(i) * side + j] = 0.0;
    }

    const double eps2 = params.refine_epsilon * params.refine_epsilon;
    double cx = initial.x;
    double cy = initial.y;
    for (int iter = 0; iter < params.refine_max_iter; ++iter) {
        double a = 0, b = 0, c = 0, bb1 = 0, bb2 = 0;
        for (int i = 0; i < side; ++i) {
            const double py = i - win;
            for (int j = 0; j < side; ++j) {
                const double px = j - win;
                const double m = mask[static_cast<std::size_t>(i) * side + j];
                const double gx = sample(gray, cx + px + 1, cy + py) - sample(gray, cx + px - 1, cy + py);
                const double gy = sample(gray, cx + px, cy + py + 1) - sample(gray, cx + px, cy + py - 1);
                const double gxx = gx * gx * m;
                const double gxy = gx * gy * m;
                const double gyy = gy * gy * m;
                a += gxx;
                b += gxy;
                c += gyy;
                bb1 += gxx * px + gxy * py;
                bb2 += gxy * px + gyy * py;
            }
        }
        const double det = a * c - b * b;
        if (std::fabs(det) <= 1e-24) break;
        const double nx = cx + (c * bb1 - b * bb2) / det;
        const double ny = cy + (a * bb2 - b * bb1) / det;
        const double step2 = (nx - cx) * (nx - cx) + (ny - cy) * (ny - cy);
        cx = nx;
        cy = ny;
        if (cx < 0 || cy < 0 || cx > gray.width() - 1 || cy > gray.height() - 1) break;
        if (step2 <= eps2) break;
    }
    if (std::fabs(cx - initial.x) > win || std::fabs(cy - initial.y) > win || !std::isfinite(cx) ||
        !std::isfinite(cy)) {
        return initial;
    }
    return {cx, cy, initial.response};
}

CornerSet shi_tomasi_corners(const ImageF& gray, const CornerParams& params) {
    params.validate();
    const int w = gray.width();
    const int h = gray.height();
    if (w < 3 || h < 3) return {};
    const ImageF resp = structure_tensor_response(gray, params.block_size, params.score, params.harris_k);
    double max_r = 0.0;
    for (float v : resp.data()) max_r = std::max(max_r, static_cast<double>(v));
    if (max_r <= 0.0) return {};
    const double thresh = params.quality_level * max_r;

    CornerSet candidates;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double v = resp.at(x, y);
            if (v <= thresh) continue;
            bool is_max = true;
            for (int j = -1; j <= 1 && is_max; ++j)
                for (int i = -1; i <= 1; ++i)
                    if (resp.at(x + i, y + j) > v) {
                        is_max = false;
                        break;
                    }
            if (is_max) candidates.push_back({static_cast<double>(x), static_cast<double>(y), v});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Corner& a, const Corner& b) { return a.response > b.response; });

    CornerSet accepted;
    const double min_d2 = params.min_distance * params.min_distance;
    for (const auto& c : candidates) {
        if (params.max_corners > 0 && static_cast<int>(accepted.size()) >= params.max_corners) break;
        const bool clear = std::ranges::all_of(accepted, [&](const Corner& a) {
            const double dx = a.x - c.x, dy = a.y - c.y;
            return dx * dx + dy * dy >= min_d2;
        });
        if (clear) accepted.push_back(c);
    }
    for (auto& c : accepted) c = refine_corner(gray, c, params);
    return accepted;
}

}  // namespace pcbfeat::shape
