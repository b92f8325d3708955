#include "listsal/image.hpp"
#include "listsal/error.hpp"

#include <algorithm>
#include <cmath>

namespace listsal {

Rgb8Image::Rgb8Image(int w, int h, Rgb8 fill) : width(w), height(h) {
    if (w <= 0 || h <= 0) throw InvalidArgument("image dimensions must be positive");
    pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
    }
}

Rgb8 Rgb8Image::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void Rgb8Image::set(int x, int y, Rgb8 c) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
}

RasterImage::RasterImage(int width, int height, std::vector<double> red, std::vector<double> green,
                         std::vector<double> blue)
    : width_(width), height_(height), red_(std::move(red)), green_(std::move(green)),
      blue_(std::move(blue)) {
    if (width_ < kMinSide || height_ < kMinSide) {
        throw InvalidArgument("image is " + std::to_string(width_) + "x" + std::to_string(height_) +
                              "; both sides must be at least " + std::to_string(kMinSide) + " px");
    }
    const std::size_t n = static_cast<std::size_t>(width_) * height_;
    if (red_.size() != n || green_.size() != n || blue_.size() != n) {
        throw InvalidArgument("image plane length does not match width*height");
    }
    for (const auto* plane : {&red_, &green_, &blue_}) {
        for (double v : *plane) {
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("image sample outside [0,1]");
        }
    }
}

RasterImage RasterImage::filled(int width, int height, double r, double g, double b) {
    const std::size_t n = static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0);
    return RasterImage(width, height, std::vector<double>(n, r), std::vector<double>(n, g),
                       std::vector<double>(n, b));
}

RasterImage RasterImage::from_rgb8(const Rgb8Image& img) {
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    std::vector<double> r(n), g(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = img.pixels[3 * i] / 255.0;
        g[i] = img.pixels[3 * i + 1] / 255.0;
        b[i] = img.pixels[3 * i + 2] / 255.0;
    }
    return RasterImage(img.width, img.height, std::move(r), std::move(g), std::move(b));
}

namespace {

std::vector<double> flip_plane(std::span<const double> plane, int width, int height) {
    std::vector<double> out(plane.size());
    for (int y = 0; y < height; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) out[row + x] = plane[row + (width - 1 - x)];
    }
    return out;
}

} // namespace

RasterImage RasterImage::flipped_horizontally() const {
    return RasterImage(width_, height_, flip_plane(red_, width_, height_),
                       flip_plane(green_, width_, height_), flip_plane(blue_, width_, height_));
}

std::string to_string(ChannelKind kind) {
    switch (kind) {
    case ChannelKind::intensity: return "intensity";
    case ChannelKind::opponent_rg: return "opponent-RG";
    case ChannelKind::opponent_by: return "opponent-BY";
    case ChannelKind::orientation: return "orientation";
    }
    return "unknown";
}

FeatureChannel::FeatureChannel(int w, int h, ChannelKind k, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill),
      kind(k) {
    if (w <= 0 || h <= 0) throw InvalidArgument("channel dimensions must be positive");
}

FeatureChannel::FeatureChannel(int w, int h, ChannelKind k, std::vector<double> v)
    : width(w), height(h), values(std::move(v)), kind(k) {
    if (w <= 0 || h <= 0) throw InvalidArgument("channel dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(w) * h) {
        throw InvalidArgument("channel plane length does not match width*height");
    }
}

FeatureChannel FeatureChannel::with_values(std::vector<double> v) const {
    FeatureChannel out(width, height, kind, std::move(v));
    out.angle_deg = angle_deg;
    return out;
}

FeatureChannel FeatureChannel::flipped_horizontally() const {
    return with_values(flip_plane(values, width, height));
}

SaliencyMap SaliencyMap::from_plane(const FeatureChannel& plane) {
    SaliencyMap map{plane.width, plane.height, plane.values};
    double peak = 0.0;
    for (double& v : map.values) {
        if (!std::isfinite(v)) throw InvalidArgument("saliency plane contains non-finite values");
        v = std::max(v, 0.0);
        peak = std::max(peak, v);
    }
    if (peak > 0.0) {
        for (double& v : map.values) v /= peak;
    }
    return map;
}

SaliencyMap SaliencyMap::flipped_horizontally() const {
    return SaliencyMap{width, height, flip_plane(values, width, height)};
}

double SaliencyMap::entropy() const {
    double total = 0.0;
    for (double v : values) total += v;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double v : values) {
        if (v > 0.0) {
            const double p = v / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

} // namespace listsal
