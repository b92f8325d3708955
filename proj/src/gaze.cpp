#include "listsal/gaze.hpp"
#include "listsal/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace listsal::gaze {

void FixationParams::validate() const {
    if (!(dispersion >= 0.0) || !std::isfinite(dispersion)) throw InvalidArgument("dispersion must be >= 0");
    if (min_duration < 0) throw InvalidArgument("min_duration must be >= 0");
}

namespace {

void check_trace(const std::vector<GazeSample>& samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const GazeSample& s = samples[i];
        if (s.participant != samples[0].participant || s.stimulus != samples[0].stimulus) {
            throw InvalidArgument("sample " + std::to_string(i) + " belongs to another trace");
        }
        if (s.t < 0 || s.t > kTrialDurationMs) {
            throw InvalidArgument("sample " + std::to_string(i) + ": timestamp " + std::to_string(s.t) +
                                  " outside [0, " + std::to_string(kTrialDurationMs) + "]");
        }
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
            throw InvalidArgument("sample " + std::to_string(i) + ": non-finite coordinate");
        }
        if (i == 0) continue;
        if (s.t == samples[i - 1].t) {
            throw InvalidArgument("duplicate timestamp " + std::to_string(s.t) + " at sample " + std::to_string(i));
        }
        if (s.t < samples[i - 1].t) {
            throw InvalidArgument("samples not sorted by time at sample " + std::to_string(i));
        }
    }
}

} // namespace

std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& samples, const FixationParams& params) {
    params.validate();
    check_trace(samples);
    std::vector<Fixation> out;
    const std::size_t n = samples.size();
    std::size_t i = 0;
    while (i < n) {
        double min_x = samples[i].x, max_x = min_x;
        double min_y = samples[i].y, max_y = min_y;
        std::size_t j = i;
        while (j + 1 < n) {
            const GazeSample& s = samples[j + 1];
            const double lx = std::min(min_x, s.x), hx = std::max(max_x, s.x);
            const double ly = std::min(min_y, s.y), hy = std::max(max_y, s.y);
            if ((hx - lx) + (hy - ly) > params.dispersion) break;
            min_x = lx, max_x = hx, min_y = ly, max_y = hy;
            ++j;
        }
        const std::int64_t duration = samples[j].t - samples[i].t;
        if (j > i && duration >= params.min_duration) {
            double sx = 0.0, sy = 0.0;
            for (std::size_t k = i; k <= j; ++k) {
                sx += samples[k].x;
                sy += samples[k].y;
            }
            const auto count = static_cast<double>(j - i + 1);
            out.push_back({sx / count, sy / count, samples[i].t, duration, static_cast<int>(j - i + 1)});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

int aoi_index_at(const AoiLayout& layout, double x, double y) {
    for (std::size_t k = 0; k < layout.aois.size(); ++k) {
        if (layout.aois[k].rect.contains(x, y)) return static_cast<int>(k);
    }
    return -1;
}

std::vector<AoiMetrics> compute_aoi_metrics(const std::vector<Fixation>& fixations, const AoiLayout& layout) {
    layout.validate();
    std::vector<AoiMetrics> metrics;
    metrics.reserve(layout.aois.size());
    for (const auto& aoi : layout.aois) metrics.push_back({{aoi.product, aoi.kind}, std::nullopt, 0, 0, 0});

    int previous = -1;
    for (std::size_t f = 0; f < fixations.size(); ++f) {
        const Fixation& fx = fixations[f];
        if (f > 0 && fx.start < fixations[f - 1].start) {
            throw InvalidArgument("fixations not sorted by start at index " + std::to_string(f));
        }
        const int idx = aoi_index_at(layout, fx.x, fx.y);
        if (idx >= 0) {
            AoiMetrics& m = metrics[static_cast<std::size_t>(idx)];
            if (!m.ttff) {
                m.ttff = fx.start;
            } else if (previous != idx) {
                ++m.revisit_count;
            }
            ++m.fixation_count;
            m.time_spent += fx.duration;
        }
        previous = idx;
    }
    return metrics;
}

std::string to_string(Grouping g) {
    switch (g) {
    case Grouping::kind: return "kind";
    case Grouping::position: return "position";
    case Grouping::neighborhood: return "neighborhood";
    }
    return "unknown";
}

Grouping parse_grouping(std::string_view s) {
    if (s == "kind") return Grouping::kind;
    if (s == "position") return Grouping::position;
    if (s == "neighborhood") return Grouping::neighborhood;
    throw InvalidArgument("unknown grouping '" + std::string(s) + "' (expected kind, position or neighborhood)");
}

DistantRule parse_distant_rule(std::string_view s) {
    if (s == "ring") return DistantRule::ring;
    if (s == "rest") return DistantRule::rest;
    throw InvalidArgument("unknown distant rule '" + std::string(s) + "' (expected ring or rest)");
}

NeighborGrouping neighbor_grouping(int outlier_position, int product_count, DistantRule rule) {
    if (product_count < 1) throw InvalidArgument("product_count must be >= 1");
    if (outlier_position < 1 || outlier_position > product_count) {
        throw InvalidArgument("outlier position " + std::to_string(outlier_position) + " outside [1," +
                              std::to_string(product_count) + "]");
    }
    NeighborGrouping g{outlier_position, {}, {}};
    for (int p = outlier_position - 1; p <= outlier_position + 1; ++p) {
        if (p >= 1 && p <= product_count) g.near.push_back(p);
    }
    for (int p = 1; p <= product_count; ++p) {
        const int d = std::abs(p - outlier_position);
        if (d == 2 || (rule == DistantRule::rest && d > 2)) g.distant.push_back(p);
    }
    return g;
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.n = static_cast<int>(values.size());
    if (values.empty()) {
        s.mean = s.median = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return s;
}

namespace {

struct CellPlan {
    std::vector<std::string> names;
    // cell index for an AOI key, -1 when the unit belongs to no cell
    std::map<AoiKey, int> membership;
};

CellPlan plan_cells(const std::vector<Trial>& trials, const AggregateOptions& options) {
    if (trials.empty()) throw InvalidArgument("aggregate_metrics: no trials");
    std::vector<AoiKey> keys;
    for (const AoiMetrics& m : trials[0].metrics) keys.push_back(m.key);
    std::sort(keys.begin(), keys.end());
    for (const Trial& t : trials) {
        std::vector<AoiKey> other;
        for (const AoiMetrics& m : t.metrics) other.push_back(m.key);
        std::sort(other.begin(), other.end());
        if (other != keys) {
            throw InvalidArgument("trial " + t.participant + "/" + t.stimulus +
                                  " uses a different AOI layout from " + trials[0].participant + "/" +
                                  trials[0].stimulus);
        }
    }
    int product_count = 0;
    for (const AoiKey& k : keys) product_count = std::max(product_count, k.product);

    CellPlan plan;
    switch (options.grouping) {
    case Grouping::kind: {
        const AoiKind kinds[] = {AoiKind::image, AoiKind::description, AoiKind::price};
        for (AoiKind k : kinds) plan.names.push_back(stimulus::to_string(k));
        for (const AoiKey& key : keys) {
            plan.membership[key] = static_cast<int>(std::find(std::begin(kinds), std::end(kinds), key.kind) -
                                                    std::begin(kinds));
        }
        break;
    }
    case Grouping::position:
        for (int p = 1; p <= product_count; ++p) plan.names.push_back(std::to_string(p));
        for (const AoiKey& key : keys) plan.membership[key] = key.product - 1;
        break;
    case Grouping::neighborhood: {
        if (!options.outlier_position) throw InvalidArgument("neighborhood grouping requires an outlier position");
        const NeighborGrouping g = neighbor_grouping(*options.outlier_position, product_count, options.distant);
        plan.names = {"near", "distant"};
        for (const AoiKey& key : keys) {
            int cell = -1;
            if (std::find(g.near.begin(), g.near.end(), key.product) != g.near.end()) cell = 0;
            if (std::find(g.distant.begin(), g.distant.end(), key.product) != g.distant.end()) cell = 1;
            plan.membership[key] = cell;
        }
        break;
    }
    }
    return plan;
}

std::optional<double> metric_value(const AoiMetrics& m, std::string_view metric) {
    if (metric == "ttff") return m.ttff ? std::optional<double>(static_cast<double>(*m.ttff)) : std::nullopt;
    if (metric == "fixation_count") return m.fixation_count;
    if (metric == "time_spent") return static_cast<double>(m.time_spent);
    if (metric == "revisit_count") return m.revisit_count;
    throw InvalidArgument("unknown metric '" + std::string(metric) + "'");
}

} // namespace

std::vector<std::vector<double>> group_values(const std::vector<Trial>& trials, const AggregateOptions& options,
                                              std::string_view metric) {
    const CellPlan plan = plan_cells(trials, options);
    std::vector<std::vector<double>> values(plan.names.size());
    for (const Trial& t : trials) {
        for (const AoiMetrics& m : t.metrics) {
            const int cell = plan.membership.at(m.key);
            if (cell < 0) continue;
            if (auto v = metric_value(m, metric)) values[static_cast<std::size_t>(cell)].push_back(*v);
        }
    }
    return values;
}

std::vector<AggregateCell> aggregate_metrics(const std::vector<Trial>& trials, const AggregateOptions& options) {
    const CellPlan plan = plan_cells(trials, options);
    std::vector<AggregateCell> cells(plan.names.size());
    std::vector<std::vector<double>> ttff(cells.size()), count(cells.size()), spent(cells.size()),
        revisits(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c].group = plan.names[c];
    for (const Trial& t : trials) {
        for (const AoiMetrics& m : t.metrics) {
            const int cell = plan.membership.at(m.key);
            if (cell < 0) continue;
            const auto c = static_cast<std::size_t>(cell);
            ++cells[c].units;
            if (m.ttff) {
                ++cells[c].fixated;
                ttff[c].push_back(static_cast<double>(*m.ttff));
            }
            count[c].push_back(m.fixation_count);
            spent[c].push_back(static_cast<double>(m.time_spent));
            revisits[c].push_back(m.revisit_count);
        }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        cells[c].ttff = summarize(std::move(ttff[c]));
        cells[c].fixation_count = summarize(std::move(count[c]));
        cells[c].time_spent = summarize(std::move(spent[c]));
        cells[c].revisit_count = summarize(std::move(revisits[c]));
    }
    return cells;
}

std::map<std::pair<std::string, std::string>, std::vector<GazeSample>>
split_traces(const std::vector<GazeSample>& samples) {
    std::map<std::pair<std::string, std::string>, std::vector<GazeSample>> traces;
    for (const GazeSample& s : samples) traces[{s.participant, s.stimulus}].push_back(s);
    return traces;
}

} // namespace listsal::gaze
