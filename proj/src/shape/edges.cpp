#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pcbfeat/shape.hpp"

namespace pcbfeat::shape {
namespace {

// Counter-clockwise as displayed (y grows downward): E, NE, N, NW, W, SW, S, SE.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(int dx, int dy) {
    for (int d = 0; d < 8; ++d)
        if (kDx[d] == dx && kDy[d] == dy) return d;
    return 0;
}

double shoelace(const std::vector<PixelPoint>& pts) {
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        twice += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
    }
    return std::fabs(twice) * 0.5;
}

double chain_length(const std::vector<PixelPoint>& pts) {
    if (pts.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        len += (a.x != b.x && a.y != b.y) ? std::numbers::sqrt2 : (a == b ? 0.0 : 1.0);
    }
    return len;
}

}  // namespace

std::pair<double, double> EdgeParams::canny_thresholds(double gray_mean_255) const {
    const double low = std::clamp(gray_mean_255 - threshold_ratio * gray_mean_255, 0.0, 255.0);
    const double high = std::clamp(gray_mean_255 + threshold_ratio * gray_mean_255, 0.0, 255.0);
    return {low, high};
}

ImageF bilateral_filter(const ImageF& src, int diameter, double sigma_color, double sigma_space) {
    const int w = src.width();
    const int h = src.height();
    const int r = diameter / 2;
    const double gc = -0.5 / (sigma_color * sigma_color);
    const double gs = -0.5 / (sigma_space * sigma_space);
    ImageF out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double centre = src.at(x, y);
            double sum = 0.0, wsum = 0.0;
            for (int j = -r; j <= r; ++j) {
                for (int i = -r; i <= r; ++i) {
                    if (i * i + j * j > r * r) continue;
                    const double v = src.at(reflect101(x + i, w), reflect101(y + j, h));
                    const double wt = std::exp(gs * (i * i + j * j) + gc * (v - centre) * (v - centre));
                    sum += wt * v;
                    wsum += wt;
                }
            }
            out.at(x, y) = static_cast<float>(sum / wsum);
        }
    }
    return out;
}

EdgeMap canny(const ImageF& gray, double low, double high, bool l2_gradient) {
    const int w = gray.width();
    const int h = gray.height();
    const auto [gx, gy] = sobel(gray, Border::replicate);
    std::vector<double> mag(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < mag.size(); ++i) {
        const double dx = gx.data()[i], dy = gy.data()[i];
        mag[i] = l2_gradient ? std::hypot(dx, dy) : std::fabs(dx) + std::fabs(dy);
    }
    auto m_at = [&](int x, int y) {
        return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[static_cast<std::size_t>(y) * w + x];
    };

    // 0 = suppressed, 1 = weak candidate, 2 = strong. Ties along the gradient
    // keep the first pixel (strict before, non-strict after). Sector bounds
    // use tan(22.5) in Q15 fixed point, exact for integer gradients.
    constexpr double kShift = 32768.0;
    constexpr double kTan22 = 13573.0;
    std::vector<std::uint8_t> state(mag.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = m_at(x, y);
            if (m <= low) continue;
            const double dx = gx.at(x, y), dy = gy.at(x, y);
            const double ax = std::fabs(dx), ay = std::fabs(dy);
            const double ys = ay * kShift;
            const double t22 = ax * kTan22;
            bool keep;
            if (ys < t22) {
                keep = m > m_at(x - 1, y) && m >= m_at(x + 1, y);
            } else if (ys > t22 + 2 * ax * kShift) {
                keep = m > m_at(x, y - 1) && m >= m_at(x, y + 1);
            } else {
                const int s = (dx < 0) != (dy < 0) ? -1 : 1;
                keep = m > m_at(x - s, y - 1) && m > m_at(x + s, y + 1);
            }
            if (keep) state[static_cast<std::size_t>(y) * w + x] = m > high ? 2 : 1;
        }
    }

    EdgeMap edges(w, h, 1);
    std::vector<int> stack;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] == 2 && !edges.data()[i]) {
            edges.data()[i] = 1;
            stack.push_back(static_cast<int>(i));
        }
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            const int px = p % w, py = p / w;
            for (int d = 0; d < 8; ++d) {
                const int nx = px + kDx[d], ny = py + kDy[d];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
                if (state[q] != 0 && !edges.data()[q]) {
                    edges.data()[q] = 1;
                    stack.push_back(static_cast<int>(q));
                }
            }
        }
    }
    return edges;
}

std::vector<Contour> external_contours(const EdgeMap& binary) {
    const int w = binary.width();
    const int h = binary.height();
    // Padded copy: 1-pixel zero frame so the outside is one 4-connected region.
    const int pw = w + 2, ph = h + 2;
    std::vector<std::uint8_t> img(static_cast<std::size_t>(pw) * ph, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img[static_cast<std::size_t>(y + 1) * pw + x + 1] = binary.at(x, y) ? 1 : 0;
    auto at = [&](int x, int y) -> std::uint8_t& { return img[static_cast<std::size_t>(y) * pw + x]; };

    // Background reachable from the frame (4-connected).
    std::vector<std::uint8_t> outside(img.size(), 0);
    std::vector<int> stack{0};
    outside[0] = 1;
    while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % pw, py = p / pw;
        constexpr int dx4[4] = {1, -1, 0, 0};
        constexpr int dy4[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int nx = px + dx4[k], ny = py + dy4[k];
            if (nx < 0 || ny < 0 || nx >= pw || ny >= ph) continue;
            const int q = ny * pw + nx;
            if (!img[q] && !outside[q]) {
                outside[q] = 1;
                stack.push_back(q);
            }
        }
    }

    std::vector<int> component(img.size(), -1);
    std::vector<Contour> contours;
    int next_id = 0;
    for (int y = 1; y <= h; ++y) {
        for (int x = 1; x <= w; ++x) {
            if (!at(x, y) || component[y * pw + x] >= 0) continue;
            // Label the 8-connected component and test whether it touches the outside.
            const int id = next_id++;
            bool external = false;
            stack.assign(1, y * pw + x);
            component[y * pw + x] = id;
            while (!stack.empty()) {
                const int p = stack.back();
                stack.pop_back();
                const int px = p % pw, py = p / pw;
                for (int d = 0; d < 8; ++d) {
                    const int q = (py + kDy[d]) * pw + px + kDx[d];
                    if (img[q]) {
                        if (component[q] < 0) {
                            component[q] = id;
                            stack.push_back(q);
                        }
                    } else if (d % 2 == 0 && outside[q]) {
                        external = true;
                    }
                }
            }
            if (!external) continue;

            // Outer border following from the raster-first pixel, whose west
            // neighbour is background.
            Contour c;
            const PixelPoint start{x, y};
            int first = -1;
            for (int k = 0; k < 8; ++k) {
                const int d = (4 - k + 8) % 8;  // clockwise from west
                if (at(x + kDx[d], y + kDy[d])) {
                    first = d;
                    break;
                }
            }
            if (first < 0) {
                c.points.push_back({x - 1, y - 1});
            } else {
                const PixelPoint p1{x + kDx[first], y + kDy[first]};
                PixelPoint prev = p1;
                PixelPoint cur = start;
                while (true) {
                    const int back = direction_of(prev.x - cur.x, prev.y - cur.y);
                    PixelPoint nxt = cur;
                    for (int k = 1; k <= 8; ++k) {
                        const int d = (back + k) % 8;  // counter-clockwise
                        if (at(cur.x + kDx[d], cur.y + kDy[d])) {
                            nxt = {cur.x + kDx[d], cur.y + kDy[d]};
                            break;
                        }
                    }
                    c.points.push_back({cur.x - 1, cur.y - 1});
                    if (nxt == start && cur == p1) break;
                    prev = cur;
                    cur = nxt;
                }
            }
            c.area = shoelace(c.points);
            c.perimeter = chain_length(c.points);
            contours.push_back(std::move(c));
        }
    }
    return contours;
}

EdgeStats canny_contour_features(const ImageF& gray, const EdgeParams& params) {
    auto to_u8 = [](double v) { return static_cast<float>(std::clamp(std::nearbyint(v), 0.0, 255.0)); };
    ImageF g255(gray.width(), gray.height(), 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < gray.size(); ++i) {
        g255.data()[i] = to_u8(gray.data()[i] * 255.0);
        sum += g255.data()[i];
    }
    const double mean = gray.size() ? sum / static_cast<double>(gray.size()) : 0.0;
    const auto [low, high] = params.canny_thresholds(mean);
    ImageF smooth = bilateral_filter(g255, params.bilateral_diameter, params.bilateral_sigma_color,
                                     params.bilateral_sigma_space);
    for (auto& v : smooth.data()) v = to_u8(v);
    const EdgeMap edges = canny(smooth, low, high, params.l2_gradient);
    const auto contours = external_contours(edges);

    EdgeStats s;
    s.contour_count = static_cast<double>(contours.size());
    for (const auto& c : contours) {
        s.max_contour_area = std::max(s.max_contour_area, c.area);
        s.total_contour_perimeter += c.perimeter;
    }
    std::size_t on = 0;
    for (auto v : edges.data()) on += v;
    s.edge_pixel_fraction = gray.size() ? static_cast<double>(on) / static_cast<double>(gray.size()) : 0.0;
    return s;
}

}  // namespace pcbfeat::shape
