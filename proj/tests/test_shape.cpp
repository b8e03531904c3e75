#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>
#include <vector>

#include "pcbfeat/shape.hpp"
#include "support.hpp"

#include "oracles/edge_fixtures.inc"

using namespace pcbfeat;
using namespace pcbfeat::shape;

namespace {

ImageF to_image(int w, int h, const std::vector<int>& v) {
    ImageF img(w, h, 1);
    for (std::size_t i = 0; i < v.size(); ++i) img.data()[i] = static_cast<float>(v[i]);
    return img;
}

ImageF constant(int w, int h, float v) { return ImageF(w, h, 1, v); }

/// Bright quadrant x >= c, y >= c on a dark background.
ImageF quadrant(int n, int c, float lo = 0.1f, float hi = 0.9f) {
    ImageF img(n, n, 1, lo);
    for (int y = c; y < n; ++y)
        for (int x = c; x < n; ++x) img.at(x, y) = hi;
    return img;
}

ImageF rotate90(const ImageF& img) {  // clockwise: (x, y) -> (n-1-y, x)
    const int n = img.width();
    ImageF out(n, n, 1);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) out.at(n - 1 - y, x) = img.at(x, y);
    return out;
}

ImageF filled_squares(int n, std::initializer_list<std::array<int, 3>> squares, float fg = 1.0f) {
    ImageF img(n, n, 1, 0.0f);
    for (const auto& [x0, y0, s] : squares)
        for (int y = y0; y < y0 + s; ++y)
            for (int x = x0; x < x0 + s; ++x) img.at(x, y) = fg;
    return img;
}

// Independent Sobel + box-sum oracle built from the textbook definitions.
double brute_tensor_min_eig(const ImageF& g, int x, int y, int block) {
    auto px = [&](int xx, int yy) { return static_cast<double>(g.at(reflect101(xx, g.width()), reflect101(yy, g.height()))); };
    auto gx = [&](int xx, int yy) {
        return (px(xx + 1, yy - 1) + 2 * px(xx + 1, yy) + px(xx + 1, yy + 1)) -
               (px(xx - 1, yy - 1) + 2 * px(xx - 1, yy) + px(xx - 1, yy + 1));
    };
    auto gy = [&](int xx, int yy) {
        return (px(xx - 1, yy + 1) + 2 * px(xx, yy + 1) + px(xx + 1, yy + 1)) -
               (px(xx - 1, yy - 1) + 2 * px(xx, yy - 1) + px(xx + 1, yy - 1));
    };
    const int r = block / 2;
    double a = 0, b = 0, c = 0;
    for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) {
            const int xx = reflect101(x + i, g.width()), yy = reflect101(y + j, g.height());
            const double dx = gx(xx, yy), dy = gy(xx, yy);
            a += dx * dx;
            b += dx * dy;
            c += dy * dy;
        }
    // Trigonometric eigen-solve: rotate into the principal frame.
    const double th = 0.5 * std::atan2(2 * b, a - c);
    const double cs = std::cos(th), sn = std::sin(th);
    const double l1 = a * cs * cs + 2 * b * sn * cs + c * sn * sn;
    const double l2 = a * sn * sn - 2 * b * sn * cs + c * cs * cs;
    return std::min(l1, l2);
}

}  // namespace

// ---------------------------------------------------------------------------
// Structure tensor and corners
// ---------------------------------------------------------------------------

TEST(StructureTensor, EigenvaluesMatchTrigonometricOracle) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng), y = u(rng), z = u(rng);
        // Random PSD tensor [[a, b], [b, c]] = sum of two outer products.
        const double a = x * x + z * z, b = x * y, c = y * y + 0.5 * z * z;
        const auto [l1, l2] = symmetric_eigenvalues(a, b, c);
        const double th = 0.5 * std::atan2(2 * b, a - c);
        const double cs = std::cos(th), sn = std::sin(th);
        const double e1 = a * cs * cs + 2 * b * sn * cs + c * sn * sn;
        const double e2 = a * sn * sn - 2 * b * sn * cs + c * cs * cs;
        const double scale = std::max(1.0, std::fabs(a) + std::fabs(c));
        EXPECT_NEAR(l1, std::max(e1, e2), 1e-6 * scale);
        EXPECT_NEAR(l2, std::min(e1, e2), 1e-6 * scale);
        EXPECT_GE(l1, l2);
    }
}

TEST(StructureTensor, ResponseMatchesBruteForce) {
    const ImageF img = test::random_f(14, 11, 8);
    const ImageF r = structure_tensor_response(img, 3);
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 14; ++x) EXPECT_NEAR(r.at(x, y), brute_tensor_min_eig(img, x, y, 3), 1e-4);
}

TEST(StructureTensor, ConstantPatchHasZeroResponse) {
    const ImageF r = structure_tensor_response(constant(12, 12, 0.4f), 3);
    for (float v : r.data()) EXPECT_EQ(v, 0.0f);
}

TEST(StructureTensor, StepEdgeIsRejected) {
    ImageF img(16, 16, 1, 0.2f);
    for (int y = 0; y < 16; ++y)
        for (int x = 8; x < 16; ++x) img.at(x, y) = 0.8f;
    const ImageF r = structure_tensor_response(img, 3);
    for (float v : r.data()) EXPECT_NEAR(v, 0.0f, 1e-5);
}

TEST(StructureTensor, CornerJunctionIsMaximal) {
    const ImageF img = quadrant(21, 10);
    const ImageF r = structure_tensor_response(img, 3);
    int bx = 0, by = 0;
    for (int y = 0; y < 21; ++y)
        for (int x = 0; x < 21; ++x)
            if (r.at(x, y) > r.at(bx, by)) {
                bx = x;
                by = y;
            }
    EXPECT_GT(r.at(bx, by), 0.0f);
    // The junction lies between pixels 9 and 10.
    EXPECT_LE(std::fabs(bx - 9.5), 1.0);
    EXPECT_LE(std::fabs(by - 9.5), 1.0);
}

TEST(StructureTensor, ShiTomasiBoundedByHalfTrace) {
    const ImageF img = test::random_f(20, 20, 3);
    const StructureTensor t = structure_tensor(img, 3);
    const ImageF r = structure_tensor_response(img, 3);
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_LE(r.data()[i], 0.5 * (t.xx.data()[i] + t.yy.data()[i]) + 1e-4);
    }
}

TEST(StructureTensor, HarrisVariant) {
    const ImageF img = test::random_f(9, 9, 4);
    const StructureTensor t = structure_tensor(img, 3);
    const ImageF h = structure_tensor_response(img, 3, CornerScore::harris, 0.04);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double a = t.xx.data()[i], b = t.xy.data()[i], c = t.yy.data()[i];
        EXPECT_NEAR(h.data()[i], a * c - b * b - 0.04 * (a + c) * (a + c), 1e-3 * std::max(1.0, a * c));
    }
}

TEST(Corners, BlankRegionIsEmpty) {
    EXPECT_TRUE(shi_tomasi_corners(constant(25, 25, 0.5f), CornerParams::for_ksize(25)).empty());
}

TEST(Corners, TwoByTwoCheckerboardHasOneRefinedCorner) {
    const ImageF img = test::checkerboard(20, 20, 10);
    const CornerSet cs = shi_tomasi_corners(img, CornerParams::for_ksize(20));
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_LE(std::hypot(cs[0].x - 9.5, cs[0].y - 9.5), 0.5);
}

TEST(Corners, TranslationEquivariance) {
    ImageF a(40, 40, 1, 0.5f), b(40, 40, 1, 0.5f);
    const ImageF board = test::checkerboard(16, 16, 8);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            a.at(x + 10, y + 10) = board.at(x, y);
            b.at(x + 13, y + 13) = board.at(x, y);
        }
    const CornerParams p = CornerParams::for_ksize(25);
    CornerSet ca = shi_tomasi_corners(a, p), cb = shi_tomasi_corners(b, p);
    ASSERT_FALSE(ca.empty());
    ASSERT_EQ(ca.size(), cb.size());
    auto by_pos = [](const Corner& l, const Corner& r) { return std::tie(l.y, l.x) < std::tie(r.y, r.x); };
    std::sort(ca.begin(), ca.end(), by_pos);
    std::sort(cb.begin(), cb.end(), by_pos);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        EXPECT_NEAR(cb[i].x, ca[i].x + 3.0, 0.1);
        EXPECT_NEAR(cb[i].y, ca[i].y + 3.0, 0.1);
    }
}

TEST(Corners, RotationEquivariance) {
    ImageF img(31, 31, 1, 0.2f);
    for (int y = 6; y < 20; ++y)
        for (int x = 9; x < 27; ++x) img.at(x, y) = 0.85f;  // off-centre rectangle
    const CornerParams p = CornerParams::for_ksize(25);
    const CornerSet a = shi_tomasi_corners(img, p);
    const CornerSet b = shi_tomasi_corners(rotate90(img), p);
    ASSERT_EQ(a.size(), 4u);
    ASSERT_EQ(b.size(), a.size());
    for (const auto& c : a) {
        const double rx = 30 - c.y, ry = c.x;
        double best = 1e9;
        for (const auto& d : b) best = std::min(best, std::hypot(d.x - rx, d.y - ry));
        EXPECT_LE(best, 0.5);
    }
}

TEST(Corners, DetectionInvariants) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ImageF img = test::random_f(25, 25, seed);
        const CornerParams p = CornerParams::for_ksize(25);
        CornerParams no_refine = p;
        no_refine.refine_max_iter = 0;
        const CornerSet raw = shi_tomasi_corners(img, no_refine);
        EXPECT_LE(raw.size(), static_cast<std::size_t>(p.max_corners));
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (i > 0) EXPECT_GE(raw[i - 1].response, raw[i].response);
            for (std::size_t j = 0; j < i; ++j)
                EXPECT_GE(std::hypot(raw[i].x - raw[j].x, raw[i].y - raw[j].y), p.min_distance);
        }
        for (const auto& c : shi_tomasi_corners(img, p)) {
            EXPECT_GE(c.x, 0.0);
            EXPECT_GE(c.y, 0.0);
            EXPECT_LE(c.x, 24.0);
            EXPECT_LE(c.y, 24.0);
        }
    }
}

TEST(Corners, ParamsScheduleAndValidation) {
    const CornerParams p = CornerParams::for_ksize(25);
    EXPECT_EQ(p.max_corners, 25);
    EXPECT_EQ(p.min_distance, 5.0);
    EXPECT_EQ(p.block_size, 3);
    EXPECT_EQ(CornerParams::for_ksize(5).min_distance, 1.0);
    EXPECT_EQ(CornerParams::for_ksize(3).min_distance, 1.0);
    CornerParams bad = p;
    bad.quality_level = 1.0;
    EXPECT_THROW(bad.validate(), InvalidParams);
    bad = p;
    bad.block_size = 4;
    EXPECT_THROW(bad.validate(), InvalidParams);
    bad = p;
    bad.min_distance = 0.5;
    EXPECT_THROW(bad.validate(), InvalidParams);
}

// ---------------------------------------------------------------------------
// DoH blobs
// ---------------------------------------------------------------------------

namespace {

BlobParams spot_params() {
    BlobParams p;
    p.min_sigma = 1.0;
    p.max_sigma = 8.0;
    p.num_sigma = 8;
    return p;
}

// Fraction of the smaller disc covered by the other, by midpoint integration.
double overlap_oracle(const Blob& a, const Blob& b) {
    const double ra = a.sigma * std::numbers::sqrt2, rb = b.sigma * std::numbers::sqrt2;
    const Blob& s = ra <= rb ? a : b;
    const Blob& l = ra <= rb ? b : a;
    const double rs = std::min(ra, rb), rl = std::max(ra, rb);
    const int n = 1000;
    long inside = 0, total = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = s.x - rs + (i + 0.5) * 2 * rs / n;
            const double y = s.y - rs + (j + 0.5) * 2 * rs / n;
            if (std::hypot(x - s.x, y - s.y) > rs) continue;
            ++total;
            if (std::hypot(x - l.x, y - l.y) <= rl) ++inside;
        }
    return static_cast<double>(inside) / static_cast<double>(total);
}

}  // namespace

TEST(Blobs, BlankImageHasNone) {
    EXPECT_TRUE(doh_blobs(constant(30, 30, 0.3f), spot_params()).empty());
}

TEST(Blobs, BrightAndDarkSpot) {
    const BlobParams p = spot_params();
    const double step = p.sigmas()[1] - p.sigmas()[0];
    for (double amplitude : {0.5, -0.5}) {
        const ImageF img = test::gaussian_spot(41, 41, 20, 20, 4.0, amplitude > 0 ? 0.2 : 0.8, amplitude);
        const auto blobs = doh_blobs(img, p);
        ASSERT_EQ(blobs.size(), 1u) << "amplitude " << amplitude;
        EXPECT_LE(std::hypot(blobs[0].x - 20, blobs[0].y - 20), 1.0);
        EXPECT_LE(std::fabs(blobs[0].sigma - 4.0), step);
    }
}

TEST(Blobs, SigmaSchedule) {
    BlobParams p = BlobParams::for_ksize(25);
    EXPECT_EQ(p.max_sigma, 12.5);
    const auto s = p.sigmas();
    ASSERT_EQ(s.size(), 5u);
    EXPECT_DOUBLE_EQ(s.front(), 1.0);
    EXPECT_DOUBLE_EQ(s.back(), 12.5);
    p.log_scale = true;
    const auto l = p.sigmas();
    EXPECT_NEAR(l[2], std::sqrt(12.5), 1e-12);
    BlobParams bad;
    bad.max_sigma = 0.5;
    EXPECT_THROW(bad.validate(), InvalidParams);
}

TEST(Blobs, OverlapMatchesNumericIntegration) {
    const Blob a{0, 0, 3.0, 1}, b{4, 1, 2.0, 1}, c{30, 0, 1.0, 1}, d{0.5, 0, 1.0, 1};
    EXPECT_NEAR(blob_overlap(a, b), overlap_oracle(a, b), 2e-3);
    EXPECT_NEAR(blob_overlap(b, a), overlap_oracle(a, b), 2e-3);
    EXPECT_EQ(blob_overlap(a, c), 0.0);
    EXPECT_EQ(blob_overlap(a, d), 1.0);
}

TEST(Blobs, TwoSeparatedSpots) {
    ImageF img(60, 30, 1, 0.2f);
    const ImageF s1 = test::gaussian_spot(60, 30, 15, 15, 3.0, 0.0, 0.6);
    const ImageF s2 = test::gaussian_spot(60, 30, 45, 15, 3.0, 0.0, 0.6);
    for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] += s1.data()[i] + s2.data()[i];
    const auto blobs = doh_blobs(img, spot_params());
    ASSERT_EQ(blobs.size(), 2u);
    for (const auto& b : blobs) {
        EXPECT_GE(b.x, 0.0);
        EXPECT_LT(b.x, 60.0);
        EXPECT_GE(b.y, 0.0);
        EXPECT_LT(b.y, 30.0);
    }
}

// ---------------------------------------------------------------------------
// Canny and contours
// ---------------------------------------------------------------------------

TEST(Contours, FilledBlock) {
    EdgeMap m(7, 7, 1, 0);
    for (int y = 2; y < 5; ++y)
        for (int x = 2; x < 5; ++x) m.at(x, y) = 1;
    const auto cs = external_contours(m);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].points.size(), 8u);
    EXPECT_DOUBLE_EQ(cs[0].area, 4.0);
    EXPECT_DOUBLE_EQ(cs[0].perimeter, 8.0);
}

TEST(Contours, SinglePixelAndDiagonal) {
    EdgeMap m(8, 8, 1, 0);
    m.at(1, 1) = 1;
    for (int i = 3; i < 7; ++i) m.at(i, i) = 1;
    const auto cs = external_contours(m);
    ASSERT_EQ(cs.size(), 2u);
    std::vector<std::size_t> sizes{cs[0].points.size(), cs[1].points.size()};
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes[0], 1u);
    EXPECT_EQ(sizes[1], 6u);  // there and back along the 4-pixel diagonal
    for (const auto& c : cs) EXPECT_EQ(c.area, 0.0);
}

TEST(Contours, HolesAndTheirContentsAreSkipped) {
    EdgeMap m(15, 15, 1, 0);
    for (int i = 2; i <= 12; ++i) m.at(i, 2) = m.at(i, 12) = m.at(2, i) = m.at(12, i) = 1;
    for (int y = 6; y <= 8; ++y)
        for (int x = 6; x <= 8; ++x) m.at(x, y) = 1;  // island inside the ring
    const auto cs = external_contours(m);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_DOUBLE_EQ(cs[0].area, 100.0);
    EXPECT_DOUBLE_EQ(cs[0].perimeter, 40.0);
}

TEST(Contours, TouchingBorder) {
    EdgeMap m(5, 5, 1, 1);
    const auto cs = external_contours(m);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_DOUBLE_EQ(cs[0].area, 16.0);
}

TEST(Canny, ThresholdsScaleWithBrightness) {
    const EdgeParams p;
    const auto [lo, hi] = p.canny_thresholds(100.0);
    EXPECT_DOUBLE_EQ(lo, 75.0);
    EXPECT_DOUBLE_EQ(hi, 125.0);
    for (double c : {0.25, 0.5, 0.9, 1.0}) {
        const auto [l2, h2] = p.canny_thresholds(100.0 * c);
        EXPECT_DOUBLE_EQ(l2, lo * c);
        EXPECT_DOUBLE_EQ(h2, hi * c);
    }
    const auto [l3, h3] = p.canny_thresholds(240.0);
    EXPECT_DOUBLE_EQ(l3, 180.0);
    EXPECT_DOUBLE_EQ(h3, 255.0);  // clamped
}

TEST(Canny, BlankRegionIsAllZero) {
    const EdgeStats s = canny_contour_features(constant(25, 25, 0.6f), EdgeParams{});
    EXPECT_EQ(s.contour_count, 0.0);
    EXPECT_EQ(s.max_contour_area, 0.0);
    EXPECT_EQ(s.total_contour_perimeter, 0.0);
    EXPECT_EQ(s.edge_pixel_fraction, 0.0);
}

TEST(Canny, FilledSquareGolden) {
    const EdgeStats s = canny_contour_features(filled_squares(25, {{{7, 7, 10}}}), EdgeParams{});
    EXPECT_EQ(s.contour_count, 1.0);
    EXPECT_NEAR(s.max_contour_area, 100.0, 15.0);
    // OpenCV reference: the edge ring cuts each corner pixel, 36 edge pixels.
    EXPECT_DOUBLE_EQ(s.max_contour_area, 97.0);
    EXPECT_NEAR(s.total_contour_perimeter, 32.0 + 4.0 * std::numbers::sqrt2, 1e-12);
    EXPECT_DOUBLE_EQ(s.edge_pixel_fraction, 36.0 / 625.0);
}

TEST(Canny, TwoDisjointSquares) {
    const EdgeStats s = canny_contour_features(filled_squares(25, {{{2, 2, 6}}, {{14, 13, 8}}}), EdgeParams{});
    EXPECT_EQ(s.contour_count, 2.0);
}

TEST(Canny, BilateralMatchesOpenCVFixtures) {
    for (const auto& fx : kEdgeFixtures) {
        const ImageF out = bilateral_filter(to_image(fx.w, fx.h, fx.image), 7, 50.0, 50.0);
        int off_by_one = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const int diff = std::abs(static_cast<int>(std::nearbyint(out.data()[i])) - fx.bilateral[i]);
            EXPECT_LE(diff, 1) << "pixel " << i;
            off_by_one += diff;
        }
        // OpenCV accumulates in float; only rare rounding-boundary pixels may differ.
        EXPECT_LE(off_by_one, static_cast<int>(out.size() / 100) + 1);
    }
}

TEST(Canny, EdgeMapMatchesOpenCVFixtures) {
    for (const auto& fx : kEdgeFixtures) {
        const EdgeMap e = canny(to_image(fx.w, fx.h, fx.bilateral), fx.low, fx.high, false);
        ASSERT_EQ(e.size(), fx.canny.size());
        for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(static_cast<int>(e.data()[i]), fx.canny[i]) << "pixel " << i;
    }
}

TEST(Contours, MatchOpenCVExternalOnRandomMaps) {
    for (const auto& fx : kContourFixtures) {
        EdgeMap m(fx.w, fx.h, 1);
        for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = static_cast<std::uint8_t>(fx.binary[i]);
        std::vector<std::pair<double, double>> got;
        for (const auto& c : external_contours(m)) got.emplace_back(c.area, c.perimeter);
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got.size(), fx.area_perimeter.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_DOUBLE_EQ(got[i].first, fx.area_perimeter[i].first);
            // The reference sums arc length in single precision.
            EXPECT_NEAR(got[i].second, fx.area_perimeter[i].second, 1e-6 * fx.area_perimeter[i].second);
        }
    }
}

TEST(Canny, EdgeMapIsBinaryAndThin) {
    const ImageF img = filled_squares(25, {{{7, 7, 10}}});
    ImageF g255(25, 25, 1);
    for (std::size_t i = 0; i < img.size(); ++i) g255.data()[i] = img.data()[i] * 255.0f;
    const EdgeMap e = canny(g255, 10, 30, false);
    int on = 0;
    for (auto v : e.data()) {
        EXPECT_TRUE(v == 0 || v == 1);
        on += v;
    }
    EXPECT_EQ(on, 36);
}

// ---------------------------------------------------------------------------
// Region slice
// ---------------------------------------------------------------------------

TEST(ShapeSlice, BlankRegionAllZeros) {
    const auto f = region_features(constant(25, 25, 0.5f), 25);
    for (double v : f) EXPECT_EQ(v, 0.0);
}

TEST(ShapeSlice, OneCornerNoBlobs) {
    // High-contrast steps excite the scale-normalized DoH at large sigma, so the
    // patch uses a faint corner whose Hessian stays below the blob threshold.
    const auto f = region_features(quadrant(25, 12, 0.45f, 0.55f), 25);
    EXPECT_EQ(f[0], 1.0);
    EXPECT_GT(f[1], 0.0);
    EXPECT_EQ(f[2], 0.0);
    EXPECT_EQ(f[3], 0.0);
}

TEST(ShapeSlice, SchemaFixedAndCountsAreIntegers) {
    const auto names = feature_names();
    ASSERT_EQ(names.size(), kFeatureCount);
    for (const auto& n : names) EXPECT_EQ(family_of(n), Family::shape);
    const ImageF img = test::random_f(50, 50, 12);
    for (int k : {5, 10, 25}) {
        const FeatureBlock b = extract_features(img, build_region_grid(50, 50, k), Exec::serial);
        EXPECT_EQ(b.cols(), kFeatureCount);
        for (std::size_t r = 0; r < b.rows; ++r)
            for (std::size_t c : {0u, 2u, 4u}) {
                EXPECT_GE(b.at(r, c), 0.0);
                EXPECT_EQ(b.at(r, c), std::floor(b.at(r, c)));
            }
    }
}

TEST(ShapeSlice, RegionsAreIsolated) {
    ImageF img = test::random_f(30, 10, 2);
    const RegionGrid g = build_region_grid(30, 10, 10);
    const FeatureBlock a = extract_features(img, g, Exec::serial);
    for (int y = 0; y < 10; ++y)
        for (int x = 20; x < 30; ++x) img.at(x, y) = 0.0f;
    const FeatureBlock b = extract_features(img, g, Exec::serial);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        EXPECT_EQ(a.at(0, c), b.at(0, c));
        EXPECT_EQ(a.at(1, c), b.at(1, c));
    }
}

TEST(ShapeSlice, SerialAndParallelIdentical) {
    const ImageF img = test::random_f(60, 40, 7);
    const RegionGrid g = build_region_grid(60, 40, 10);
    const int prev = set_worker_count(4);
    EXPECT_EQ(extract_features(img, g, Exec::serial).values, extract_features(img, g, Exec::parallel).values);
    set_worker_count(prev);
}
