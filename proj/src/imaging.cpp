#include "listsal/imaging.hpp"
#include "listsal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace listsal::imaging {

namespace {

struct Tap {
    int index;
    double weight;
};

// Per-output-sample source taps for one axis.
using AxisTable = std::vector<std::vector<Tap>>;

AxisTable bilinear_table(int src, int dst) {
    AxisTable table(dst);
    const double ratio = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        double pos = (i + 0.5) * ratio - 0.5;
        pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
        const int i0 = static_cast<int>(std::floor(pos));
        const double t = pos - i0;
        if (i0 + 1 < src && t > 0.0) {
            table[i] = {{i0, 1.0 - t}, {i0 + 1, t}};
        } else {
            table[i] = {{i0, 1.0}};
        }
    }
    return table;
}

AxisTable area_table(int src, int dst) {
    AxisTable table(dst);
    const double ratio = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        const double lo = i * ratio;
        const double hi = (i + 1) * ratio;
        for (int s = static_cast<int>(std::floor(lo)); s < src && s < hi; ++s) {
            const double overlap = std::min<double>(hi, s + 1) - std::max<double>(lo, s);
            if (overlap > 0.0) table[i].push_back({s, overlap / ratio});
        }
    }
    return table;
}

AxisTable resample_table(int src, int dst, bool force_bilinear) {
    if (src == dst) {
        AxisTable table(dst);
        for (int i = 0; i < dst; ++i) table[i] = {{i, 1.0}};
        return table;
    }
    if (force_bilinear || dst > src) return bilinear_table(src, dst);
    return area_table(src, dst);
}

std::vector<double> apply_separable(std::span<const double> src, int sw, int sh,
                                    const AxisTable& xs, const AxisTable& ys) {
    const int dw = static_cast<int>(xs.size());
    const int dh = static_cast<int>(ys.size());
    std::vector<double> rows(static_cast<std::size_t>(dw) * sh);
    for (int y = 0; y < sh; ++y) {
        const double* in = src.data() + static_cast<std::size_t>(y) * sw;
        double* out = rows.data() + static_cast<std::size_t>(y) * dw;
        for (int x = 0; x < dw; ++x) {
            double acc = 0.0;
            for (const Tap& t : xs[x]) acc += t.weight * in[t.index];
            out[x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(dw) * dh, 0.0);
    for (int y = 0; y < dh; ++y) {
        double* dst = out.data() + static_cast<std::size_t>(y) * dw;
        for (const Tap& t : ys[y]) {
            const double* in = rows.data() + static_cast<std::size_t>(t.index) * dw;
            for (int x = 0; x < dw; ++x) dst[x] += t.weight * in[x];
        }
    }
    return out;
}

FeatureChannel resample(const FeatureChannel& channel, int width, int height, bool force_bilinear) {
    if (width <= 0 || height <= 0) throw InvalidArgument("resize target must be positive");
    const AxisTable xs = resample_table(channel.width, width, force_bilinear);
    const AxisTable ys = resample_table(channel.height, height, force_bilinear);
    FeatureChannel out(width, height, channel.kind,
                       apply_separable(channel.values, channel.width, channel.height, xs, ys));
    out.angle_deg = channel.angle_deg;
    return out;
}

// 1-D correlation with clamp-to-edge borders, along x (stride 1) or y.
std::vector<double> correlate_rows(std::span<const double> src, int w, int h,
                                   std::span<const double> taps) {
    const int half = static_cast<int>(taps.size()) / 2;
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        const double* in = src.data() + static_cast<std::size_t>(y) * w;
        double* o = out.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int u = -half; u <= half; ++u) {
                acc += taps[u + half] * in[std::clamp(x + u, 0, w - 1)];
            }
            o[x] = acc;
        }
    }
    return out;
}

std::vector<double> correlate_cols(std::span<const double> src, int w, int h,
                                   std::span<const double> taps) {
    const int half = static_cast<int>(taps.size()) / 2;
    std::vector<double> out(src.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        double* o = out.data() + static_cast<std::size_t>(y) * w;
        for (int v = -half; v <= half; ++v) {
            const double k = taps[v + half];
            const double* in = src.data() + static_cast<std::size_t>(std::clamp(y + v, 0, h - 1)) * w;
            for (int x = 0; x < w; ++x) o[x] += k * in[x];
        }
    }
    return out;
}

} // namespace

std::vector<FeatureChannel> extract_channels(const RasterImage& image) {
    const int w = image.width();
    const int h = image.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const auto r = image.red();
    const auto g = image.green();
    const auto b = image.blue();

    FeatureChannel intensity(w, h, ChannelKind::intensity);
    FeatureChannel rg(w, h, ChannelKind::opponent_rg);
    FeatureChannel by(w, h, ChannelKind::opponent_by);

    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        intensity.values[i] = (r[i] + g[i] + b[i]) / 3.0;
        peak = std::max(peak, intensity.values[i]);
    }
    const double dark = 0.1 * peak;
    for (std::size_t i = 0; i < n; ++i) {
        if (intensity.values[i] < dark) continue;
        const double red = std::max(0.0, r[i] - (g[i] + b[i]) / 2.0);
        const double green = std::max(0.0, g[i] - (r[i] + b[i]) / 2.0);
        const double blue = std::max(0.0, b[i] - (r[i] + g[i]) / 2.0);
        const double yellow =
            std::max(0.0, (r[i] + g[i]) / 2.0 - std::abs(r[i] - g[i]) / 2.0 - b[i]);
        rg.values[i] = red - green;
        by.values[i] = blue - yellow;
    }
    return {std::move(intensity), std::move(rg), std::move(by)};
}

int max_pyramid_levels(int width, int height) {
    int levels = 1;
    const int side = std::min(width, height);
    while ((1L << levels) <= side) ++levels;
    return levels;
}

FeatureChannel smooth_binomial(const FeatureChannel& channel) {
    const int w = channel.width;
    const int h = channel.height;
    const auto& in = channel.values;
    // Symmetric taps are paired before weighting so that mirrored inputs give
    // bit-identical mirrored outputs.
    auto tap5 = [](double m2, double m1, double c, double p1, double p2) {
        return ((m2 + p2) + 4.0 * (m1 + p1) + 6.0 * c) / 16.0;
    };
    std::vector<double> rows(in.size());
    for (int y = 0; y < h; ++y) {
        const double* s = in.data() + static_cast<std::size_t>(y) * w;
        double* o = rows.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            o[x] = tap5(s[std::max(x - 2, 0)], s[std::max(x - 1, 0)], s[x], s[std::min(x + 1, w - 1)],
                        s[std::min(x + 2, w - 1)]);
        }
    }
    std::vector<double> out(in.size());
    auto row = [&](int y) { return rows.data() + static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w; };
    for (int y = 0; y < h; ++y) {
        const double* m2 = row(y - 2);
        const double* m1 = row(y - 1);
        const double* c = row(y);
        const double* p1 = row(y + 1);
        const double* p2 = row(y + 2);
        double* o = out.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) o[x] = tap5(m2[x], m1[x], c[x], p1[x], p2[x]);
    }
    return channel.with_values(std::move(out));
}

FeatureChannel decimate(const FeatureChannel& channel) {
    const int w = channel.width;
    const int h = channel.height;
    const int dw = (w + 1) / 2;
    const int dh = (h + 1) / 2;
    // Even sizes: sample midway between source pixels 2i and 2i+1.
    auto sample_x = [&](const double* row, int i) {
        return (w % 2 == 0) ? 0.5 * (row[2 * i] + row[2 * i + 1]) : row[2 * i];
    };
    std::vector<double> out(static_cast<std::size_t>(dw) * dh);
    for (int j = 0; j < dh; ++j) {
        const double* a = channel.values.data() + static_cast<std::size_t>(2 * j) * w;
        const double* b = (h % 2 == 0) ? a + w : a;
        for (int i = 0; i < dw; ++i) {
            const double va = sample_x(a, i);
            out[static_cast<std::size_t>(j) * dw + i] = (h % 2 == 0) ? 0.5 * (va + sample_x(b, i)) : va;
        }
    }
    FeatureChannel result(dw, dh, channel.kind, std::move(out));
    result.angle_deg = channel.angle_deg;
    return result;
}

GaussianPyramid build_pyramid(const FeatureChannel& channel, int levels) {
    if (levels < 1) throw InvalidArgument("pyramid needs at least one level");
    const int feasible = max_pyramid_levels(channel.width, channel.height);
    if (levels > feasible) {
        throw InvalidArgument("a " + std::to_string(channel.width) + "x" +
                              std::to_string(channel.height) + " channel supports at most " +
                              std::to_string(feasible) + " pyramid levels (requested " +
                              std::to_string(levels) + ")");
    }
    GaussianPyramid pyramid;
    pyramid.levels.reserve(levels);
    pyramid.levels.push_back(channel);
    for (int l = 1; l < levels; ++l) {
        pyramid.levels.push_back(decimate(smooth_binomial(pyramid.levels.back())));
    }
    return pyramid;
}

FeatureChannel center_surround(const GaussianPyramid& pyramid, int center, int surround) {
    const int n = static_cast<int>(pyramid.size());
    if (center < 0 || surround >= n || center >= surround) {
        throw InvalidArgument("center-surround needs 0 <= center < surround < " + std::to_string(n) +
                              " (got " + std::to_string(center) + ", " + std::to_string(surround) +
                              ")");
    }
    const FeatureChannel& c = pyramid[center];
    const FeatureChannel s = resize_bilinear(pyramid[surround], c.width, c.height);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(c.values[i] - s.values[i]);
    return c.with_values(std::move(out));
}

namespace {

struct SeparableGabor {
    std::vector<double> g;      // envelope
    std::vector<double> hcos;   // g(u) cos(a u), along x
    std::vector<double> hsin;
    std::vector<double> vcos;   // g(v) cos(b v), along y
    std::vector<double> vsin;
    double dc = 0.0;            // Gaussian-weighted mean removed from the even part
};

SeparableGabor separable_gabor(double angle_deg, const GaborParams& p) {
    if (p.size < 3 || p.size % 2 == 0) throw InvalidArgument("Gabor kernel size must be odd and >= 3");
    if (!(p.wavelength > 0.0) || !(p.sigma > 0.0)) {
        throw InvalidArgument("Gabor wavelength and sigma must be positive");
    }
    const int half = p.size / 2;
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double k = 2.0 * std::numbers::pi / p.wavelength;
    const double a = k * std::cos(theta);
    const double b = k * std::sin(theta);
    SeparableGabor s;
    for (int u = -half; u <= half; ++u) {
        const double env = std::exp(-(u * u) / (2.0 * p.sigma * p.sigma));
        s.g.push_back(env);
        s.hcos.push_back(env * std::cos(a * u));
        s.hsin.push_back(env * std::sin(a * u));
        s.vcos.push_back(env * std::cos(b * u));
        s.vsin.push_back(env * std::sin(b * u));
    }
    auto sum = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    };
    const double sum_g = sum(s.g);
    // sum over the 2-D grid of g(u)g(v)cos(au + bv), expanded separably
    const double sum_cos = sum(s.hcos) * sum(s.vcos) - sum(s.hsin) * sum(s.vsin);
    s.dc = sum_cos / (sum_g * sum_g);
    return s;
}

} // namespace

GaborKernels gabor_kernels(double angle_deg, const GaborParams& params) {
    const SeparableGabor s = separable_gabor(angle_deg, params);
    const int n = params.size;
    GaborKernels k{n, std::vector<double>(static_cast<std::size_t>(n) * n),
                   std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * n + u;
            k.even[i] = s.hcos[u] * s.vcos[v] - s.hsin[u] * s.vsin[v] - s.dc * s.g[u] * s.g[v];
            k.odd[i] = s.hsin[u] * s.vcos[v] + s.hcos[u] * s.vsin[v];
        }
    }
    return k;
}

std::vector<FeatureChannel> gabor_bank(const FeatureChannel& intensity,
                                       std::span<const double> angles_deg,
                                       const GaborParams& params) {
    if (angles_deg.empty()) throw InvalidArgument("gabor_bank needs at least one orientation");
    if (intensity.kind != ChannelKind::intensity) {
        throw InvalidArgument("gabor_bank expects an intensity channel");
    }
    const int w = intensity.width;
    const int h = intensity.height;
    std::vector<FeatureChannel> out;
    out.reserve(angles_deg.size());
    for (double angle : angles_deg) {
        const SeparableGabor s = separable_gabor(angle, params);
        const auto hc = correlate_rows(intensity.values, w, h, s.hcos);
        const auto hs = correlate_rows(intensity.values, w, h, s.hsin);
        const auto hg = correlate_rows(intensity.values, w, h, s.g);
        const auto cc = correlate_cols(hc, w, h, s.vcos);
        const auto ss = correlate_cols(hs, w, h, s.vsin);
        const auto gg = correlate_cols(hg, w, h, s.g);
        const auto sc = correlate_cols(hs, w, h, s.vcos);
        const auto cs = correlate_cols(hc, w, h, s.vsin);
        std::vector<double> energy(intensity.size());
        for (std::size_t i = 0; i < energy.size(); ++i) {
            const double even = cc[i] - ss[i] - s.dc * gg[i];
            const double odd = sc[i] + cs[i];
            energy[i] = std::sqrt(even * even + odd * odd);
        }
        FeatureChannel ch(w, h, ChannelKind::orientation, std::move(energy));
        ch.angle_deg = angle;
        out.push_back(std::move(ch));
    }
    return out;
}

FeatureChannel normalize_map(const FeatureChannel& map, const NormalizeParams& params) {
    if (params.window < 1 || params.window % 2 == 0) {
        throw InvalidArgument("normalisation window must be a positive odd size");
    }
    double lo = map.values.empty() ? 0.0 : map.values.front();
    double hi = lo;
    for (double v : map.values) {
        if (!std::isfinite(v)) throw InvalidArgument("normalize_map: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    // Ranges at rounding-noise level carry no peak structure.
    const double scale = std::max({1.0, std::abs(hi), std::abs(lo)});
    if (!(range > 1e-12 * scale)) return map.with_values(std::vector<double>(map.size(), 0.0));

    std::vector<double> r(map.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (map.values[i] - lo) / range;

    const int w = map.width;
    const int h = map.height;
    const int half = params.window / 2;
    // Values within kPeakTie are one level, so rounding noise cannot split or merge peaks.
    constexpr double kPeakTie = 1e-9;
    const auto at = [&](int x, int y) { return r[static_cast<std::size_t>(y) * w + x]; };
    std::vector<int> parent(r.size(), -1);
    std::vector<std::size_t> candidates;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = at(x, y);
            if (v < params.peak_floor) continue;
            bool is_peak = true;
            for (int yy = std::max(0, y - half); is_peak && yy <= std::min(h - 1, y + half); ++yy) {
                for (int xx = std::max(0, x - half); xx <= std::min(w - 1, x + half); ++xx) {
                    if (at(xx, yy) > v + kPeakTie) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (!is_peak) continue;
            const auto i = static_cast<std::size_t>(y) * w + x;
            parent[i] = static_cast<int>(i);
            candidates.push_back(i);
        }
    }
    // a plateau of level maxima inside one window counts once
    const auto root = [&](std::size_t i) {
        while (parent[i] != static_cast<int>(i)) i = static_cast<std::size_t>(parent[i] = parent[parent[i]]);
        return i;
    };
    for (const auto i : candidates) {
        const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
        for (int yy = std::max(0, y - half); yy <= std::min(h - 1, y + half); ++yy) {
            for (int xx = std::max(0, x - half); xx <= std::min(w - 1, x + half); ++xx) {
                const auto j = static_cast<std::size_t>(yy) * w + xx;
                if (parent[j] < 0 || std::abs(r[j] - r[i]) > kPeakTie) continue;
                const auto a = root(i), b = root(j);
                if (a != b) parent[std::max(a, b)] = static_cast<int>(std::min(a, b));
            }
        }
    }
    std::vector<double> group_peak(r.size(), -1.0);
    for (const auto i : candidates) {
        auto& g = group_peak[root(i)];
        g = std::max(g, r[i]);
    }
    std::vector<double> peaks;
    for (const auto i : candidates) {
        if (root(i) == i) peaks.push_back(group_peak[i]);
    }
    double mean_others = 0.0;
    if (peaks.size() > 1) {
        auto top = std::max_element(peaks.begin(), peaks.end());
        peaks.erase(top);
        double acc = 0.0;
        for (double p : peaks) acc += p;
        mean_others = acc / static_cast<double>(peaks.size());
    }
    const double gain = (1.0 - mean_others) * (1.0 - mean_others);
    for (double& v : r) v *= gain;
    return map.with_values(std::move(r));
}

FeatureChannel resize(const FeatureChannel& channel, int width, int height) {
    return resample(channel, width, height, false);
}

FeatureChannel resize_bilinear(const FeatureChannel& channel, int width, int height) {
    return resample(channel, width, height, true);
}

RasterImage fit_longer_side(const RasterImage& image, int max_side) {
    if (max_side < RasterImage::kMinSide) throw InvalidArgument("max_side below minimum image size");
    const int w = image.width();
    const int h = image.height();
    const int longer = std::max(w, h);
    if (longer <= max_side) return image;
    const double s = static_cast<double>(max_side) / longer;
    const int nw = std::max(RasterImage::kMinSide, static_cast<int>(std::lround(w * s)));
    const int nh = std::max(RasterImage::kMinSide, static_cast<int>(std::lround(h * s)));
    auto plane = [&](std::span<const double> p) {
        FeatureChannel c(w, h, ChannelKind::intensity, std::vector<double>(p.begin(), p.end()));
        auto v = resize(c, nw, nh).values;
        for (double& x : v) x = std::clamp(x, 0.0, 1.0);
        return v;
    };
    return RasterImage(nw, nh, plane(image.red()), plane(image.green()), plane(image.blue()));
}

} // namespace listsal::imaging
