#include "raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace listsal::raster {

namespace {

// Classic 5x7 font, ASCII 0x20..0x7E. Column-major, bit 0 is the top row.
constexpr std::uint8_t kFont[95][5] = {
    {0x00, 0x00, 0x00, 0x00, 0x00}, {0x00, 0x00, 0x5F, 0x00, 0x00}, {0x00, 0x07, 0x00, 0x07, 0x00},
    {0x14, 0x7F, 0x14, 0x7F, 0x14}, {0x24, 0x2A, 0x7F, 0x2A, 0x12}, {0x23, 0x13, 0x08, 0x64, 0x62},
    {0x36, 0x49, 0x55, 0x22, 0x50}, {0x00, 0x05, 0x03, 0x00, 0x00}, {0x00, 0x1C, 0x22, 0x41, 0x00},
    {0x00, 0x41, 0x22, 0x1C, 0x00}, {0x08, 0x2A, 0x1C, 0x2A, 0x08}, {0x08, 0x08, 0x3E, 0x08, 0x08},
    {0x00, 0x50, 0x30, 0x00, 0x00}, {0x08, 0x08, 0x08, 0x08, 0x08}, {0x00, 0x60, 0x60, 0x00, 0x00},
    {0x20, 0x10, 0x08, 0x04, 0x02}, {0x3E, 0x51, 0x49, 0x45, 0x3E}, {0x00, 0x42, 0x7F, 0x40, 0x00},
    {0x42, 0x61, 0x51, 0x49, 0x46}, {0x21, 0x41, 0x45, 0x4B, 0x31}, {0x18, 0x14, 0x12, 0x7F, 0x10},
    {0x27, 0x45, 0x45, 0x45, 0x39}, {0x3C, 0x4A, 0x49, 0x49, 0x30}, {0x01, 0x71, 0x09, 0x05, 0x03},
    {0x36, 0x49, 0x49, 0x49, 0x36}, {0x06, 0x49, 0x49, 0x29, 0x1E}, {0x00, 0x36, 0x36, 0x00, 0x00},
    {0x00, 0x56, 0x36, 0x00, 0x00}, {0x08, 0x14, 0x22, 0x41, 0x00}, {0x14, 0x14, 0x14, 0x14, 0x14},
    {0x00, 0x41, 0x22, 0x14, 0x08}, {0x02, 0x01, 0x51, 0x09, 0x06}, {0x32, 0x49, 0x79, 0x41, 0x3E},
    {0x7E, 0x11, 0x11, 0x11, 0x7E}, {0x7F, 0x49, 0x49, 0x49, 0x36}, {0x3E, 0x41, 0x41, 0x41, 0x22},
    {0x7F, 0x41, 0x41, 0x22, 0x1C}, {0x7F, 0x49, 0x49, 0x49, 0x41}, {0x7F, 0x09, 0x09, 0x09, 0x01},
    {0x3E, 0x41, 0x49, 0x49, 0x7A}, {0x7F, 0x08, 0x08, 0x08, 0x7F}, {0x00, 0x41, 0x7F, 0x41, 0x00},
    {0x20, 0x40, 0x41, 0x3F, 0x01}, {0x7F, 0x08, 0x14, 0x22, 0x41}, {0x7F, 0x40, 0x40, 0x40, 0x40},
    {0x7F, 0x02, 0x0C, 0x02, 0x7F}, {0x7F, 0x04, 0x08, 0x10, 0x7F}, {0x3E, 0x41, 0x41, 0x41, 0x3E},
    {0x7F, 0x09, 0x09, 0x09, 0x06}, {0x3E, 0x41, 0x51, 0x21, 0x5E}, {0x7F, 0x09, 0x19, 0x29, 0x46},
    {0x46, 0x49, 0x49, 0x49, 0x31}, {0x01, 0x01, 0x7F, 0x01, 0x01}, {0x3F, 0x40, 0x40, 0x40, 0x3F},
    {0x1F, 0x20, 0x40, 0x20, 0x1F}, {0x3F, 0x40, 0x38, 0x40, 0x3F}, {0x63, 0x14, 0x08, 0x14, 0x63},
    {0x07, 0x08, 0x70, 0x08, 0x07}, {0x61, 0x51, 0x49, 0x45, 0x43}, {0x00, 0x7F, 0x41, 0x41, 0x00},
    {0x02, 0x04, 0x08, 0x10, 0x20}, {0x00, 0x41, 0x41, 0x7F, 0x00}, {0x04, 0x02, 0x01, 0x02, 0x04},
    {0x40, 0x40, 0x40, 0x40, 0x40}, {0x00, 0x01, 0x02, 0x04, 0x00}, {0x20, 0x54, 0x54, 0x54, 0x78},
    {0x7F, 0x48, 0x44, 0x44, 0x38}, {0x38, 0x44, 0x44, 0x44, 0x20}, {0x38, 0x44, 0x44, 0x48, 0x7F},
    {0x38, 0x54, 0x54, 0x54, 0x18}, {0x08, 0x7E, 0x09, 0x01, 0x02}, {0x0C, 0x52, 0x52, 0x52, 0x3E},
    {0x7F, 0x08, 0x04, 0x04, 0x78}, {0x00, 0x44, 0x7D, 0x40, 0x00}, {0x20, 0x40, 0x44, 0x3D, 0x00},
    {0x7F, 0x10, 0x28, 0x44, 0x00}, {0x00, 0x41, 0x7F, 0x40, 0x00}, {0x7C, 0x04, 0x18, 0x04, 0x78},
    {0x7C, 0x08, 0x04, 0x04, 0x78}, {0x38, 0x44, 0x44, 0x44, 0x38}, {0x7C, 0x14, 0x14, 0x14, 0x08},
    {0x08, 0x14, 0x14, 0x18, 0x7C}, {0x7C, 0x08, 0x04, 0x04, 0x08}, {0x48, 0x54, 0x54, 0x54, 0x20},
    {0x04, 0x3F, 0x44, 0x40, 0x20}, {0x3C, 0x40, 0x40, 0x20, 0x7C}, {0x1C, 0x20, 0x40, 0x20, 0x1C},
    {0x3C, 0x40, 0x30, 0x40, 0x3C}, {0x44, 0x28, 0x10, 0x28, 0x44}, {0x0C, 0x50, 0x50, 0x50, 0x3C},
    {0x44, 0x64, 0x54, 0x4C, 0x44}, {0x00, 0x08, 0x36, 0x41, 0x00}, {0x00, 0x00, 0x7F, 0x00, 0x00},
    {0x00, 0x41, 0x36, 0x08, 0x00}, {0x08, 0x04, 0x08, 0x10, 0x08},
};

void put(Rgb8Image& img, int x, int y, Rgb8 c) {
    if (img.contains(x, y)) img.set(x, y, c);
}

} // namespace

void hline(Rgb8Image& img, int x0, int x1, int y, Rgb8 c) {
    if (y < 0 || y >= img.height) return;
    for (int x = std::max(x0, 0); x <= std::min(x1, img.width - 1); ++x) img.set(x, y, c);
}

void fill_rect(Rgb8Image& img, int x, int y, int w, int h, Rgb8 c) {
    for (int yy = y; yy < y + h; ++yy) hline(img, x, x + w - 1, yy, c);
}

void fill_rounded_rect(Rgb8Image& img, int x, int y, int w, int h, int radius, Rgb8 c) {
    radius = std::clamp(radius, 0, std::min(w, h) / 2);
    for (int yy = 0; yy < h; ++yy) {
        int inset = 0;
        const int dy = (yy < radius) ? radius - yy : (yy >= h - radius ? yy - (h - radius - 1) : 0);
        if (dy > 0) {
            const double r = radius;
            const double off = r - std::sqrt(std::max(0.0, r * r - (dy - 0.5) * (dy - 0.5)));
            inset = static_cast<int>(std::lround(off));
        }
        hline(img, x + inset, x + w - 1 - inset, y + yy, c);
    }
}

void fill_ellipse(Rgb8Image& img, int cx, int cy, int rx, int ry, Rgb8 c) {
    for (int dy = -ry; dy <= ry; ++dy) {
        const double t = 1.0 - static_cast<double>(dy * dy) / (static_cast<double>(ry) * ry + 1e-9);
        if (t < 0.0) continue;
        const int half = static_cast<int>(std::floor(rx * std::sqrt(t) + 0.5));
        hline(img, cx - half, cx + half, cy + dy, c);
    }
}

void fill_polygon(Rgb8Image& img, const std::vector<std::pair<int, int>>& pts, Rgb8 c) {
    if (pts.size() < 3) return;
    int ymin = pts[0].second;
    int ymax = ymin;
    for (const auto& p : pts) {
        ymin = std::min(ymin, p.second);
        ymax = std::max(ymax, p.second);
    }
    for (int y = ymin; y <= ymax; ++y) {
        const double sy = y + 0.5;
        std::vector<double> xs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto [x0, y0] = pts[i];
            const auto [x1, y1] = pts[(i + 1) % pts.size()];
            if ((y0 <= sy && y1 > sy) || (y1 <= sy && y0 > sy)) {
                xs.push_back(x0 + (sy - y0) * (x1 - x0) / static_cast<double>(y1 - y0));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            hline(img, static_cast<int>(std::ceil(xs[i] - 0.5)), static_cast<int>(std::floor(xs[i + 1] - 0.5)),
                  y, c);
        }
    }
}

std::pair<int, int> text_extent(std::string_view text, int scale, bool bold) {
    if (text.empty()) return {0, 0};
    const int w = static_cast<int>(text.size()) * kAdvance * scale - scale + (bold ? 1 : 0);
    return {w, kGlyphH * scale};
}

void draw_text(Rgb8Image& img, int x, int y, std::string_view text, int scale, Rgb8 c, bool bold) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char ch = static_cast<unsigned char>(text[i]);
        if (ch < 0x20 || ch > 0x7E) ch = '?';
        const std::uint8_t* glyph = kFont[ch - 0x20];
        const int gx = x + static_cast<int>(i) * kAdvance * scale;
        for (int col = 0; col < kGlyphW; ++col) {
            for (int row = 0; row < kGlyphH; ++row) {
                if (!(glyph[col] & (1u << row))) continue;
                for (int sy = 0; sy < scale; ++sy) {
                    for (int sx = 0; sx < scale + (bold ? 1 : 0); ++sx) {
                        put(img, gx + col * scale + sx, y + row * scale + sy, c);
                    }
                }
            }
        }
    }
}

Rgb8 blend(Rgb8 a, Rgb8 b, double t) {
    auto mix = [t](std::uint8_t u, std::uint8_t v) {
        return static_cast<std::uint8_t>(std::lround((1.0 - t) * u + t * v));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Rgb8 from_hsv(double hue_deg, double sat, double val) {
    double h = std::fmod(hue_deg, 360.0);
    if (h < 0.0) h += 360.0;
    const double c = val * sat;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    const double m = val - c;
    auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    return {q(r + m), q(g + m), q(b + m)};
}

void to_hsv(Rgb8 c, double& hue_deg, double& sat, double& val) {
    const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    val = mx;
    sat = mx > 0.0 ? d / mx : 0.0;
    if (d == 0.0) {
        hue_deg = 0.0;
    } else if (mx == r) {
        hue_deg = 60.0 * std::fmod((g - b) / d, 6.0);
    } else if (mx == g) {
        hue_deg = 60.0 * ((b - r) / d + 2.0);
    } else {
        hue_deg = 60.0 * ((r - g) / d + 4.0);
    }
    if (hue_deg < 0.0) hue_deg += 360.0;
}

} // namespace listsal::raster
