#include "listsal/itti.hpp"
#include "listsal/error.hpp"

#include <algorithm>

namespace listsal::itti {

using imaging::build_pyramid;
using imaging::center_surround;
using imaging::normalize_map;

void IttiParams::validate() const {
    if (pyramid_levels < 1) throw InvalidArgument("pyramid_levels must be >= 1");
    if (center_levels.empty()) throw InvalidArgument("center_levels must not be empty");
    if (deltas.empty()) throw InvalidArgument("deltas must not be empty");
    if (orientations.empty()) throw InvalidArgument("orientations must not be empty");
    const int min_c = *std::min_element(center_levels.begin(), center_levels.end());
    const int max_c = *std::max_element(center_levels.begin(), center_levels.end());
    const int min_d = *std::min_element(deltas.begin(), deltas.end());
    const int max_d = *std::max_element(deltas.begin(), deltas.end());
    if (min_c < 0) throw InvalidArgument("center_levels must be non-negative");
    if (min_d < 1) throw InvalidArgument("deltas must be positive");
    if (max_c + max_d >= pyramid_levels) {
        throw InvalidArgument("center_levels/deltas reach level " + std::to_string(max_c + max_d) +
                              " but pyramid_levels is " + std::to_string(pyramid_levels));
    }
    if (output_level < 0 || output_level >= pyramid_levels) {
        throw InvalidArgument("output_level must lie in [0, pyramid_levels)");
    }
    if (max_side < RasterImage::kMinSide) throw InvalidArgument("max_side too small");
}

std::string to_string(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::intensity: return "intensity";
    case FeatureGroup::color: return "color";
    case FeatureGroup::orientation: return "orientation";
    }
    return "unknown";
}

namespace {

void check_size(const RasterImage& fitted, const IttiParams& params) {
    const int feasible = imaging::max_pyramid_levels(fitted.width(), fitted.height());
    if (params.pyramid_levels > feasible) {
        throw InvalidArgument("image of " + std::to_string(fitted.width()) + "x" +
                              std::to_string(fitted.height()) + " px supports at most " +
                              std::to_string(feasible) + " pyramid levels; " +
                              std::to_string(params.pyramid_levels) + " requested");
    }
}

std::vector<FeatureChannel> group_channels(const RasterImage& fitted, FeatureGroup group,
                                           const IttiParams& params) {
    auto channels = imaging::extract_channels(fitted);
    switch (group) {
    case FeatureGroup::intensity: return {std::move(channels[0])};
    case FeatureGroup::color: return {std::move(channels[1]), std::move(channels[2])};
    case FeatureGroup::orientation: return imaging::gabor_bank(channels[0], params.orientations);
    }
    return {};
}

FeatureChannel conspicuity_of(const std::vector<FeatureChannel>& channels, const IttiParams& params) {
    FeatureChannel sum;
    for (const FeatureChannel& ch : channels) {
        const GaussianPyramid pyr = build_pyramid(ch, params.pyramid_levels);
        const FeatureChannel& out_level = pyr[static_cast<std::size_t>(params.output_level)];
        if (sum.values.empty()) sum = FeatureChannel(out_level.width, out_level.height, ch.kind);
        for (int c : params.center_levels) {
            for (int d : params.deltas) {
                const FeatureChannel fm =
                    imaging::resize(normalize_map(center_surround(pyr, c, c + d)), sum.width, sum.height);
                for (std::size_t i = 0; i < sum.size(); ++i) sum.values[i] += fm.values[i];
            }
        }
    }
    return normalize_map(sum);
}

} // namespace

std::vector<FeatureChannel> feature_maps(const FeatureChannel& channel, const IttiParams& params) {
    params.validate();
    const GaussianPyramid pyr = build_pyramid(channel, params.pyramid_levels);
    std::vector<FeatureChannel> maps;
    for (int c : params.center_levels) {
        for (int d : params.deltas) maps.push_back(center_surround(pyr, c, c + d));
    }
    return maps;
}

FeatureChannel conspicuity_map(const RasterImage& image, FeatureGroup group, const IttiParams& params) {
    params.validate();
    const RasterImage fitted = imaging::fit_longer_side(image, params.max_side);
    check_size(fitted, params);
    return conspicuity_of(group_channels(fitted, group, params), params);
}

SaliencyMap itti_saliency(const RasterImage& image, const IttiParams& params) {
    params.validate();
    const RasterImage fitted = imaging::fit_longer_side(image, params.max_side);
    check_size(fitted, params);

    auto channels = imaging::extract_channels(fitted);
    const FeatureChannel intensity = conspicuity_of({channels[0]}, params);
    const FeatureChannel color = conspicuity_of({channels[1], channels[2]}, params);
    const FeatureChannel orientation =
        conspicuity_of(imaging::gabor_bank(channels[0], params.orientations), params);

    FeatureChannel mean = intensity.with_values(std::vector<double>(intensity.size()));
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean.values[i] = (intensity.values[i] + color.values[i] + orientation.values[i]) / 3.0;
    }
    return SaliencyMap::from_plane(imaging::resize(mean, image.width(), image.height()));
}

} // namespace listsal::itti
