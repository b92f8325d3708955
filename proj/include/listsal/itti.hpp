#pragma once

#include "listsal/image.hpp"
#include "listsal/imaging.hpp"

#include <string>
#include <vector>

namespace listsal::itti {

struct IttiParams {
    int pyramid_levels = 9;
    std::vector<int> center_levels{2, 3, 4};
    std::vector<int> deltas{3, 4};
    int output_level = 4;
    std::vector<double> orientations{0.0, 45.0, 90.0, 135.0};
    int max_side = 768; // inputs are shrunk to this before feature extraction

    /// Throws InvalidArgument naming the inconsistent field.
    void validate() const;
};

enum class FeatureGroup { intensity, color, orientation };

std::string to_string(FeatureGroup g);

/// Summed, normalised centre-surround maps of one feature group at
/// output_level resolution of the (size-fitted) input.
FeatureChannel conspicuity_map(const RasterImage& image, FeatureGroup group,
                               const IttiParams& params = {});

/// Mean of the three conspicuity maps, upsampled to the input size and
/// rescaled to a unit peak.
SaliencyMap itti_saliency(const RasterImage& image, const IttiParams& params = {});

/// All centre-surround feature maps of one channel, before normalisation.
std::vector<FeatureChannel> feature_maps(const FeatureChannel& channel, const IttiParams& params);

} // namespace listsal::itti
