#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace listsal {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// Interleaved 8-bit RGB pixels, row-major. The on-disk representation of
/// renders and overlays.
struct Rgb8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // 3 * width * height

    Rgb8Image() = default;
    Rgb8Image(int w, int h, Rgb8 fill = {255, 255, 255});

    Rgb8 at(int x, int y) const;
    void set(int x, int y, Rgb8 c);
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

/// Three planes of unit-interval reals. Construction validates the
/// invariants, so every RasterImage in circulation is usable by the models.
class RasterImage {
public:
    static constexpr int kMinSide = 16;

    RasterImage(int width, int height, std::vector<double> red, std::vector<double> green,
                std::vector<double> blue);

    static RasterImage filled(int width, int height, double r, double g, double b);
    static RasterImage from_rgb8(const Rgb8Image& img);

    int width() const { return width_; }
    int height() const { return height_; }

    std::span<const double> red() const { return red_; }
    std::span<const double> green() const { return green_; }
    std::span<const double> blue() const { return blue_; }

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    RasterImage flipped_horizontally() const;

private:
    int width_;
    int height_;
    std::vector<double> red_;
    std::vector<double> green_;
    std::vector<double> blue_;
};

enum class ChannelKind { intensity, opponent_rg, opponent_by, orientation };

std::string to_string(ChannelKind kind);

/// A single real-valued plane tagged with the feature it carries.
struct FeatureChannel {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    ChannelKind kind = ChannelKind::intensity;
    double angle_deg = 0.0; // meaningful for orientation channels only

    FeatureChannel() = default;
    FeatureChannel(int w, int h, ChannelKind k, double fill = 0.0);
    FeatureChannel(int w, int h, ChannelKind k, std::vector<double> v);

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return values.size(); }

    /// Same geometry and kind, different samples.
    FeatureChannel with_values(std::vector<double> v) const;
    FeatureChannel flipped_horizontally() const;
};

struct GaussianPyramid {
    std::vector<FeatureChannel> levels;

    std::size_t size() const { return levels.size(); }
    const FeatureChannel& operator[](std::size_t i) const { return levels[i]; }
};

/// Attention density at source-image resolution; peak is 1 unless the map is
/// identically zero.
struct SaliencyMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

    /// Rescales a non-negative plane so its maximum becomes 1.
    static SaliencyMap from_plane(const FeatureChannel& plane);

    SaliencyMap flipped_horizontally() const;
    /// Shannon entropy (nats) of the map read as a distribution over pixels.
    double entropy() const;
};

} // namespace listsal
