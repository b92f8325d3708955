#pragma once

// Integer rasterisation helpers for the stimulus renderer. Internal.

#include "listsal/image.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace listsal::raster {

void fill_rect(Rgb8Image& img, int x, int y, int w, int h, Rgb8 c);
void fill_rounded_rect(Rgb8Image& img, int x, int y, int w, int h, int radius, Rgb8 c);
void fill_ellipse(Rgb8Image& img, int cx, int cy, int rx, int ry, Rgb8 c);
void fill_polygon(Rgb8Image& img, const std::vector<std::pair<int, int>>& pts, Rgb8 c);
void hline(Rgb8Image& img, int x0, int x1, int y, Rgb8 c);

inline constexpr int kGlyphW = 5;
inline constexpr int kGlyphH = 7;
inline constexpr int kAdvance = 6;

/// Pixel extent of `text` at integer `scale`; bold adds one column.
std::pair<int, int> text_extent(std::string_view text, int scale, bool bold = false);

/// Draws ASCII text with the embedded 5x7 font; unknown bytes render as '?'.
void draw_text(Rgb8Image& img, int x, int y, std::string_view text, int scale, Rgb8 c, bool bold = false);

Rgb8 blend(Rgb8 a, Rgb8 b, double t); // (1-t)*a + t*b
Rgb8 from_hsv(double hue_deg, double sat, double val);
void to_hsv(Rgb8 c, double& hue_deg, double& sat, double& val);

} // namespace listsal::raster
