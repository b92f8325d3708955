#include "support.hpp"

#include "listsal/error.hpp"
#include "listsal/imaging.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace listsal;
using namespace listsal::imaging;

namespace {

FeatureChannel random_channel(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FeatureChannel c(w, h, ChannelKind::intensity);
    for (double& v : c.values) v = u(rng);
    return c;
}

double max_abs_diff(const FeatureChannel& a, const FeatureChannel& b) {
    REQUIRE(a.width == b.width);
    REQUIRE(a.height == b.height);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// Pixel-centre aligned bilinear upsampling, written out per pixel.
double bilinear_at(const FeatureChannel& src, int dw, int dh, int x, int y) {
    auto coord = [](int i, int s, int d) {
        return std::clamp((i + 0.5) * s / d - 0.5, 0.0, static_cast<double>(s - 1));
    };
    const double fx = coord(x, src.width, dw), fy = coord(y, src.height, dh);
    const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
    const int x1 = std::min(x0 + 1, src.width - 1), y1 = std::min(y0 + 1, src.height - 1);
    const double tx = fx - x0, ty = fy - y0;
    return (1 - ty) * ((1 - tx) * src.at(x0, y0) + tx * src.at(x1, y0)) +
           ty * ((1 - tx) * src.at(x0, y1) + tx * src.at(x1, y1));
}

double channel_energy(const FeatureChannel& c) {
    double s = 0.0;
    for (double v : c.values) s += v;
    return s;
}

} // namespace

TEST_CASE("gray image has mid intensity and no opponency") {
    const auto ch = extract_channels(RasterImage::filled(32, 32, 0.5, 0.5, 0.5));
    for (std::size_t i = 0; i < ch[0].size(); ++i) {
        CHECK(ch[0].values[i] == 0.5);
        CHECK(ch[1].values[i] == 0.0);
        CHECK(ch[2].values[i] == 0.0);
    }
}

TEST_CASE("pure red gives positive RG and non-positive BY") {
    const auto ch = extract_channels(RasterImage::filled(32, 32, 1.0, 0.0, 0.0));
    for (std::size_t i = 0; i < ch[1].size(); ++i) {
        CHECK(ch[1].values[i] > 0.0);
        CHECK(ch[2].values[i] <= 0.0);
    }
}

TEST_CASE("channel planes of the test card match per-pixel formulas") {
    const Rgb8Image card = io::read_png(testing::data_path("cards/test_card_64.png"));
    const auto ch = extract_channels(RasterImage::from_rgb8(card));
    double peak = 0.0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const Rgb8 p = card.at(x, y);
            peak = std::max(peak, (p.r / 255.0 + p.g / 255.0 + p.b / 255.0) / 3.0);
        }
    }
    int dark = 0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const Rgb8 p = card.at(x, y);
            const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
            const double in = (r + g + b) / 3.0;
            double rg = 0.0, by = 0.0;
            if (in >= 0.1 * peak) {
                const double R = std::max(0.0, r - (g + b) / 2);
                const double G = std::max(0.0, g - (r + b) / 2);
                const double B = std::max(0.0, b - (r + g) / 2);
                const double Y = std::max(0.0, (r + g) / 2 - std::abs(r - g) / 2 - b);
                rg = R - G;
                by = B - Y;
            } else {
                ++dark;
            }
            CHECK(ch[0].at(x, y) == doctest::Approx(in).epsilon(1e-15));
            CHECK(std::abs(ch[1].at(x, y) - rg) < 1e-15);
            CHECK(std::abs(ch[2].at(x, y) - by) < 1e-15);
        }
    }
    CHECK(dark > 0);
}

TEST_CASE("pyramid smoothing preserves constants") {
    FeatureChannel c(40, 24, ChannelKind::intensity, 0.37);
    const auto pyr = build_pyramid(c, 4);
    REQUIRE(pyr.size() == 4);
    for (const auto& level : pyr.levels) {
        for (double v : level.values) CHECK(std::abs(v - 0.37) < 1e-12);
    }
}

TEST_CASE("pyramid level 1 of a centred impulse equals dense convolution then decimation") {
    FeatureChannel c(16, 16, ChannelKind::intensity);
    c.at(8, 8) = 1.0;
    const auto pyr = build_pyramid(c, 2);
    const double w1[5] = {1, 4, 6, 4, 1};
    // dense 5x5 convolution with clamped borders
    FeatureChannel smooth(16, 16, ChannelKind::intensity);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            double acc = 0.0;
            for (int v = -2; v <= 2; ++v) {
                for (int u = -2; u <= 2; ++u) {
                    acc += w1[u + 2] * w1[v + 2] / 256.0 * c.at(std::clamp(x + u, 0, 15), std::clamp(y + v, 0, 15));
                }
            }
            smooth.at(x, y) = acc;
        }
    }
    REQUIRE(pyr[1].width == 8);
    REQUIRE(pyr[1].height == 8);
    for (int j = 0; j < 8; ++j) {
        for (int i = 0; i < 8; ++i) {
            const double expect = (smooth.at(2 * i, 2 * j) + smooth.at(2 * i + 1, 2 * j) +
                                   smooth.at(2 * i, 2 * j + 1) + smooth.at(2 * i + 1, 2 * j + 1)) / 4.0;
            CHECK(std::abs(pyr[1].at(i, j) - expect) < 1e-15);
        }
    }
}

TEST_CASE("single-level pyramid is the input") {
    std::mt19937_64 rng(3);
    const auto c = random_channel(rng, 21, 17);
    const auto pyr = build_pyramid(c, 1);
    REQUIRE(pyr.size() == 1);
    CHECK(pyr[0].values == c.values);
}

TEST_CASE("pyramid level count is bounded by the image size") {
    CHECK(max_pyramid_levels(256, 256) == 9);
    CHECK(max_pyramid_levels(256, 255) == 8);
    CHECK_THROWS_AS(build_pyramid(FeatureChannel(16, 16, ChannelKind::intensity), 6), InvalidArgument);
}

TEST_CASE("center-surround of a constant pyramid is zero") {
    const auto pyr = build_pyramid(FeatureChannel(64, 48, ChannelKind::intensity, 0.8), 6);
    for (double v : center_surround(pyr, 1, 4).values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("center-surround on the bright disc matches direct upsample-subtract") {
    const auto ch = extract_channels(testing::load_card("bright_disc_256.png"));
    const auto pyr = build_pyramid(ch[0], 6);
    const auto cs = center_surround(pyr, 2, 5);
    const auto& c = pyr[2];
    REQUIRE(cs.width == c.width);
    double best = -1.0;
    int bx = 0, by = 0;
    for (int y = 0; y < c.height; ++y) {
        for (int x = 0; x < c.width; ++x) {
            const double expect = std::abs(c.at(x, y) - bilinear_at(pyr[5], c.width, c.height, x, y));
            CHECK(std::abs(cs.at(x, y) - expect) < 1e-12);
            if (cs.at(x, y) > best) best = cs.at(x, y), bx = x, by = y;
        }
    }
    // Disc of radius 10 px centred on source pixel 128; a level-2 sample i
    // covers source pixels around 4i + 1.5.
    const double cx = (128 - 1.5) / 4.0, r = 10.0 / 4.0;
    CHECK(std::hypot(bx - cx, by - cx) <= r + 1.5);
}

TEST_CASE("center-surround rejects center >= surround") {
    const auto pyr = build_pyramid(FeatureChannel(64, 64, ChannelKind::intensity, 0.5), 6);
    CHECK_THROWS_AS(center_surround(pyr, 3, 3), InvalidArgument);
    CHECK_THROWS_AS(center_surround(pyr, 4, 2), InvalidArgument);
    CHECK_THROWS_AS(center_surround(pyr, 2, 6), InvalidArgument);
}

TEST_CASE("pyramid and center-surround commute with horizontal flip") {
    std::mt19937_64 rng(11);
    for (auto [w, h] : {std::pair{64, 64}, {67, 50}, {90, 33}}) {
        const auto c = random_channel(rng, w, h);
        const auto a = build_pyramid(c, 5);
        const auto b = build_pyramid(c.flipped_horizontally(), 5);
        for (std::size_t l = 0; l < a.size(); ++l) {
            CHECK(max_abs_diff(a[l].flipped_horizontally(), b[l]) < 1e-9);
        }
        CHECK(max_abs_diff(center_surround(a, 1, 4).flipped_horizontally(), center_surround(b, 1, 4)) < 1e-9);
    }
}

TEST_CASE("Gabor energy prefers the orientation of a vertical bar") {
    FeatureChannel img(64, 64, ChannelKind::intensity, 0.0);
    for (int y = 0; y < 64; ++y) {
        for (int x = 30; x < 34; ++x) img.at(x, y) = 1.0;
    }
    const std::vector<double> angles{0.0, 90.0};
    const auto bank = gabor_bank(img, angles);
    CHECK(channel_energy(bank[0]) > channel_energy(bank[1]));
}

TEST_CASE("Gabor energy of a constant image vanishes") {
    const std::vector<double> angles{0.0, 45.0, 90.0, 135.0};
    for (const auto& ch : gabor_bank(FeatureChannel(48, 40, ChannelKind::intensity, 0.7), angles)) {
        for (double v : ch.values) CHECK(std::abs(v) < 1e-6);
    }
}

TEST_CASE("45 degree grating is picked up by the 45 degree channel") {
    FeatureChannel img(64, 64, ChannelKind::intensity);
    const double k = 2.0 * std::numbers::pi / 8.0;
    const double c45 = std::cos(std::numbers::pi / 4);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) img.at(x, y) = 0.5 + 0.5 * std::cos(k * (x * c45 + y * c45));
    }
    const std::vector<double> angles{0.0, 45.0, 90.0, 135.0};
    const auto bank = gabor_bank(img, angles);
    // Direct evaluation of the dense kernels at the centre agrees with the
    // separable bank, and the 45 degree channel wins.
    std::vector<double> centre;
    for (std::size_t a = 0; a < angles.size(); ++a) {
        const auto kern = gabor_kernels(angles[a]);
        double even = 0.0, odd = 0.0;
        const int half = kern.size / 2;
        for (int v = -half; v <= half; ++v) {
            for (int u = -half; u <= half; ++u) {
                const std::size_t i = static_cast<std::size_t>(v + half) * kern.size + (u + half);
                even += kern.even[i] * img.at(32 + u, 32 + v);
                odd += kern.odd[i] * img.at(32 + u, 32 + v);
            }
        }
        const double e = std::sqrt(even * even + odd * odd);
        CHECK(std::abs(e - bank[a].at(32, 32)) < 1e-9);
        centre.push_back(e);
    }
    CHECK(std::max_element(centre.begin(), centre.end()) - centre.begin() == 1);
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t a = 0; a < bank.size(); ++a) {
        if (channel_energy(bank[a]) > best) best = channel_energy(bank[a]), arg = a;
    }
    CHECK(arg == 1);
}

TEST_CASE("Gabor bank is equivariant under 90 degree rotation") {
    std::mt19937_64 rng(5);
    const int n = 48;
    const auto img = random_channel(rng, n, n);
    FeatureChannel rot(n, n, ChannelKind::intensity);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) rot.at(x, y) = img.at(y, n - 1 - x);
    }
    const std::vector<double> angles{0.0, 45.0, 90.0, 135.0};
    const auto a = gabor_bank(rot, angles);
    const auto b = gabor_bank(img, angles);
    const int half = GaborParams{}.size / 2;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        // theta on the rotated image corresponds to theta - 90 on the original
        const std::size_t j = (i + 2) % 4;
        double worst = 0.0;
        for (int y = half; y < n - half; ++y) {
            for (int x = half; x < n - half; ++x) {
                worst = std::max(worst, std::abs(a[i].at(x, y) - b[j].at(y, n - 1 - x)));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("normalize_map keeps a lone peak") {
    FeatureChannel m(20, 20, ChannelKind::intensity);
    m.at(7, 11) = 3.5;
    const auto out = normalize_map(m);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 20; ++x) CHECK(out.at(x, y) == (x == 7 && y == 11 ? 1.0 : 0.0));
    }
}

TEST_CASE("normalize_map zeroes two equal peaks") {
    FeatureChannel m(30, 20, ChannelKind::intensity);
    m.at(5, 5) = 1.0;
    m.at(24, 14) = 1.0;
    for (double v : normalize_map(m).values) CHECK(v == 0.0);
}

TEST_CASE("normalize_map on a multi-peak map matches a brute-force neighbourhood scan") {
    // Gaussian bumps of distinct heights on a sloped floor.
    FeatureChannel m(40, 32, ChannelKind::intensity);
    const struct {
        double x, y, a, s;
    } bumps[] = {{6, 7, 1.0, 2.0}, {30, 8, 0.62, 2.5}, {20, 24, 0.41, 1.8}, {35, 27, 0.23, 1.5}, {9, 26, 0.9, 2.2}};
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 40; ++x) {
            double v = 0.001 * x;
            for (const auto& b : bumps) v += b.a * std::exp(-((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (2 * b.s * b.s));
            m.at(x, y) = v;
        }
    }
    double lo = m.values[0], hi = lo;
    for (double v : m.values) lo = std::min(lo, v), hi = std::max(hi, v);
    std::vector<double> peaks;
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 40; ++x) {
            const double v = (m.at(x, y) - lo) / (hi - lo);
            if (v < 0.05) continue;
            bool peak = true;
            for (int dy = -3; dy <= 3; ++dy) {
                for (int dx = -3; dx <= 3; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if ((dx || dy) && xx >= 0 && yy >= 0 && xx < 40 && yy < 32 && (m.at(xx, yy) - lo) / (hi - lo) >= v) {
                        peak = false;
                    }
                }
            }
            if (peak) peaks.push_back(v);
        }
    }
    REQUIRE(peaks.size() == 5);
    std::sort(peaks.begin(), peaks.end());
    const double mean_others = (peaks[0] + peaks[1] + peaks[2] + peaks[3]) / 4.0;
    const double gain = (1 - mean_others) * (1 - mean_others);
    const auto out = normalize_map(m);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 40; ++x) CHECK(std::abs(out.at(x, y) - gain * (m.at(x, y) - lo) / (hi - lo)) < 1e-12);
    }
}

TEST_CASE("normalize_map output stays in the unit interval") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureChannel m(23, 19, ChannelKind::intensity);
        for (double& v : m.values) v = nd(rng);
        for (double v : normalize_map(m).values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("resampling preserves constants and exact sizes") {
    FeatureChannel c(37, 23, ChannelKind::intensity, 0.25);
    for (auto [w, h] : {std::pair{10, 7}, {80, 50}, {37, 60}}) {
        const auto a = resize(c, w, h);
        const auto b = resize_bilinear(c, w, h);
        CHECK(a.width == w);
        CHECK(b.height == h);
        for (double v : a.values) CHECK(std::abs(v - 0.25) < 1e-12);
        for (double v : b.values) CHECK(std::abs(v - 0.25) < 1e-12);
    }
}

TEST_CASE("area downsampling by an integer factor averages blocks") {
    std::mt19937_64 rng(2);
    const auto c = random_channel(rng, 12, 9);
    const auto d = resize(c, 4, 3);
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 4; ++i) {
            double s = 0.0;
            for (int y = 3 * j; y < 3 * j + 3; ++y) {
                for (int x = 3 * i; x < 3 * i + 3; ++x) s += c.at(x, y);
            }
            CHECK(std::abs(d.at(i, j) - s / 9.0) < 1e-12);
        }
    }
}

TEST_CASE("fit_longer_side shrinks only oversized images") {
    const auto small = RasterImage::filled(300, 100, 0.2, 0.4, 0.6);
    CHECK(fit_longer_side(small, 768).width() == 300);
    const auto big = RasterImage::filled(800, 2400, 0.2, 0.4, 0.6);
    const auto fitted = fit_longer_side(big, 768);
    CHECK(fitted.width() == 256);
    CHECK(fitted.height() == 768);
}
