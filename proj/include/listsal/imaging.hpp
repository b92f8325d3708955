#pragma once

// Image primitives shared by the saliency models: colour opponency, binomial
// pyramids, centre-surround differences, a quadrature Gabor bank and the
// peak-competition normaliser.

#include "listsal/image.hpp"

#include <span>
#include <vector>

namespace listsal::imaging {

/// Returns {intensity, opponent-RG, opponent-BY}. Opponency is zeroed where
/// intensity is below 10% of the image maximum.
std::vector<FeatureChannel> extract_channels(const RasterImage& image);

/// Largest level count whose coarsest level is still at least one pixel
/// after halving min(width, height) repeatedly: 2^(levels-1) <= min side.
int max_pyramid_levels(int width, int height);

/// One smoothing pass with the separable [1 4 6 4 1]/16 kernel, clamped edges.
FeatureChannel smooth_binomial(const FeatureChannel& channel);

/// Halves each dimension (ceil). Output samples sit on a grid centred on the
/// source, so decimation commutes with mirroring for odd and even sizes.
FeatureChannel decimate(const FeatureChannel& channel);

GaussianPyramid build_pyramid(const FeatureChannel& channel, int levels);

/// |center - bilinear(surround)| at the center level's resolution.
FeatureChannel center_surround(const GaussianPyramid& pyramid, int center, int surround);

struct GaborParams {
    double wavelength = 8.0;
    double sigma = 4.0;
    int size = 17;
};

/// One channel per angle holding the quadrature-pair energy
/// sqrt(even^2 + odd^2). The angle is the direction of the carrier wave in
/// image coordinates (x right, y down), so 0 deg responds to vertical bars.
std::vector<FeatureChannel> gabor_bank(const FeatureChannel& intensity,
                                       std::span<const double> angles_deg,
                                       const GaborParams& params = {});

/// Dense even/odd kernels, row-major, size*size. Only used by tests and the
/// documentation; gabor_bank filters separably.
struct GaborKernels {
    int size = 0;
    std::vector<double> even;
    std::vector<double> odd;
};
GaborKernels gabor_kernels(double angle_deg, const GaborParams& params = {});

struct NormalizeParams {
    int window = 7;            // local-maximum neighbourhood (odd)
    double peak_floor = 0.05;  // maxima below this are ignored
};

/// Rescales to [0,1] then multiplies by (1 - mean_other_peaks)^2, where
/// mean_other_peaks averages the local maxima other than one instance of the
/// global maximum. Plateaus count once: a pixel is a maximum only if it is
/// strictly above earlier (raster order) neighbours and not below later ones.
/// Flat input maps to all zeros.
FeatureChannel normalize_map(const FeatureChannel& map, const NormalizeParams& params = {});

/// Separable resampling on pixel centres: bilinear when enlarging an axis,
/// box (area) averaging when shrinking it.
FeatureChannel resize(const FeatureChannel& channel, int width, int height);

/// Bilinear interpolation only, pixel-centre aligned, clamped at the border.
FeatureChannel resize_bilinear(const FeatureChannel& channel, int width, int height);

/// Shrinks the image so its longer side is at most max_side; returns the
/// input unchanged when it already fits.
RasterImage fit_longer_side(const RasterImage& image, int max_side);

} // namespace listsal::imaging
