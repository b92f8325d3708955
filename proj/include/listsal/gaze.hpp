#pragma once

// Fixation detection, per-AOI engagement metrics and cohort aggregation.

#include "listsal/stimulus.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace listsal::gaze {

using stimulus::AoiKind;
using stimulus::AoiLayout;

inline constexpr std::int64_t kTrialDurationMs = 90000;

struct GazeSample {
    std::string participant;
    std::string stimulus;
    std::int64_t t = 0; // ms from trial start
    double x = 0.0;
    double y = 0.0;
};

struct Fixation {
    double x = 0.0; // centroid
    double y = 0.0;
    std::int64_t start = 0;
    std::int64_t duration = 0;
    int sample_count = 0;
};

struct FixationParams {
    double dispersion = 100.0;      // px, (max x - min x) + (max y - min y)
    std::int64_t min_duration = 100; // ms

    void validate() const;
};

/// Dispersion-threshold (I-DT) detection on one participant's trace for one
/// stimulus. Samples must be strictly increasing in t.
std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& samples,
                                       const FixationParams& params = {});

struct AoiKey {
    int product = 1;
    AoiKind kind = AoiKind::image;

    friend auto operator<=>(const AoiKey&, const AoiKey&) = default;
};

struct AoiMetrics {
    AoiKey key;
    std::optional<std::int64_t> ttff;
    int fixation_count = 0;
    std::int64_t time_spent = 0;
    int revisit_count = 0;
};

/// Index into layout.aois of the AOI containing (x, y), or -1.
int aoi_index_at(const AoiLayout& layout, double x, double y);

/// One entry per AOI of the layout, in layout order.
std::vector<AoiMetrics> compute_aoi_metrics(const std::vector<Fixation>& fixations, const AoiLayout& layout);

/// Metrics of one participant on one stimulus.
struct Trial {
    std::string participant;
    std::string stimulus;
    std::vector<AoiMetrics> metrics;
};

enum class Grouping { kind, position, neighborhood };
enum class DistantRule { ring, rest }; // +-2 only, or every non-near position

std::string to_string(Grouping g);
Grouping parse_grouping(std::string_view s);
DistantRule parse_distant_rule(std::string_view s);

struct NeighborGrouping {
    int outlier_position = 1;
    std::vector<int> near;
    std::vector<int> distant;
};

NeighborGrouping neighbor_grouping(int outlier_position, int product_count = stimulus::kProductsPerPage,
                                   DistantRule rule = DistantRule::ring);

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    int n = 0;
};

Summary summarize(std::vector<double> values);

struct AggregateCell {
    std::string group;
    int units = 0;   // (participant, AOI) pairs in the cell
    int fixated = 0; // units with a ttff
    Summary ttff;
    Summary fixation_count;
    Summary time_spent;
    Summary revisit_count;
};

struct AggregateOptions {
    Grouping grouping = Grouping::kind;
    std::optional<int> outlier_position; // required for neighborhood
    DistantRule distant = DistantRule::ring;
};

/// Unit of aggregation is one participant's metrics on one AOI. Cells come
/// out in a fixed order: kinds as declared, positions ascending, near then
/// distant.
std::vector<AggregateCell> aggregate_metrics(const std::vector<Trial>& trials, const AggregateOptions& options);

/// Per-unit values of one metric for every cell, in the same order as
/// aggregate_metrics. Missing ttff values are dropped.
std::vector<std::vector<double>> group_values(const std::vector<Trial>& trials, const AggregateOptions& options,
                                              std::string_view metric);

/// Splits samples into traces keyed by (participant, stimulus), keeping
/// their input order.
std::map<std::pair<std::string, std::string>, std::vector<GazeSample>>
split_traces(const std::vector<GazeSample>& samples);

} // namespace listsal::gaze
