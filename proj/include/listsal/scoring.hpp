#pragma once

// Saliency pooled over AOI rectangles, per-kind outlier ranking and hit@k.

#include "listsal/gaze.hpp"
#include "listsal/image.hpp"
#include "listsal/stimulus.hpp"

#include <string>
#include <vector>

namespace listsal::scoring {

using gaze::AoiKey;
using stimulus::AoiKind;

struct AoiSaliency {
    AoiKey key;
    double mean = 0.0;
    double max = 0.0;
    double mass_share = 0.0; // AOI mass / whole-map mass; 0 for an all-zero map
};

/// One entry per layout AOI, in layout order.
std::vector<AoiSaliency> aoi_saliency(const SaliencyMap& map, const stimulus::AoiLayout& layout);

struct RankedProduct {
    int product = 1;
    double mean = 0.0;
    double z = 0.0;
};

/// Products of one AOI kind sorted by descending mean saliency (ties keep
/// layout order). With z_normalize the z-scores use the population standard
/// deviation of the kind's means; zero variance gives z = 0 for all.
std::vector<RankedProduct> rank_outliers(const std::vector<AoiSaliency>& scores, AoiKind kind,
                                         bool z_normalize = true);

/// 1-based rank of `product` in a ranking, or 0 when absent.
int rank_of(const std::vector<RankedProduct>& ranking, int product);

struct CorpusItem {
    std::string model;
    stimulus::StimulusSpec spec;
    SaliencyMap map;
    stimulus::AoiLayout layout;
};

struct Detection {
    std::string model;
    std::string feature;
    int position = 1;
    int k = 3;
    int hits = 0;
    int total = 0;
    double hit_rate = 0.0;
};

/// Per-stimulus rank of the injected outlier among products of the AOI kind
/// that displays its feature.
struct StimulusRank {
    std::string model;
    std::string feature;
    int position = 1;
    int rank = 0;
};

StimulusRank outlier_rank(const CorpusItem& item);

/// Rows sorted by (model, feature, position).
std::vector<Detection> detection_report(const std::vector<StimulusRank>& ranks, int k);
std::vector<Detection> detection_report(const std::vector<CorpusItem>& corpus, int k);

} // namespace listsal::scoring
