#include "listsal/scoring.hpp"
#include "listsal/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace listsal::scoring {

std::vector<AoiSaliency> aoi_saliency(const SaliencyMap& map, const stimulus::AoiLayout& layout) {
    if (map.width != layout.page_width || map.height != layout.page_height) {
        throw InvalidArgument("saliency map is " + std::to_string(map.width) + "x" + std::to_string(map.height) +
                              " but the layout page is " + std::to_string(layout.page_width) + "x" +
                              std::to_string(layout.page_height));
    }
    layout.validate();
    double total = 0.0;
    for (double v : map.values) total += v;

    std::vector<AoiSaliency> out;
    out.reserve(layout.aois.size());
    for (const auto& aoi : layout.aois) {
        const auto& r = aoi.rect;
        double sum = 0.0, peak = 0.0;
        for (int y = r.y; y < r.y + r.h; ++y) {
            const double* row = map.values.data() + static_cast<std::size_t>(y) * map.width;
            for (int x = r.x; x < r.x + r.w; ++x) {
                sum += row[x];
                peak = std::max(peak, row[x]);
            }
        }
        const double area = static_cast<double>(r.w) * r.h;
        out.push_back({{aoi.product, aoi.kind}, sum / area, peak, total > 0.0 ? sum / total : 0.0});
    }
    return out;
}

std::vector<RankedProduct> rank_outliers(const std::vector<AoiSaliency>& scores, AoiKind kind, bool z_normalize) {
    std::vector<RankedProduct> ranked;
    for (const AoiSaliency& s : scores) {
        if (s.key.kind == kind) ranked.push_back({s.key.product, s.mean, 0.0});
    }
    if (ranked.size() < 3) {
        throw InvalidArgument("rank_outliers: need at least 3 products of kind " + stimulus::to_string(kind));
    }
    const auto [lo, hi] = std::minmax_element(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.mean < b.mean;
    });
    // equal means leave z at 0; the computed variance would be rounding noise
    if (z_normalize && lo->mean < hi->mean) {
        double mean = 0.0;
        for (const auto& r : ranked) mean += r.mean;
        mean /= static_cast<double>(ranked.size());
        double var = 0.0;
        for (const auto& r : ranked) var += (r.mean - mean) * (r.mean - mean);
        const double sd = std::sqrt(var / static_cast<double>(ranked.size()));
        if (sd > 0.0) {
            for (auto& r : ranked) r.z = (r.mean - mean) / sd;
        }
    }
    // Sorting on the raw mean keeps the order exactly invariant under positive
    // affine rescaling; z is a monotone function of it.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedProduct& a, const RankedProduct& b) { return a.mean > b.mean; });
    return ranked;
}

int rank_of(const std::vector<RankedProduct>& ranking, int product) {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (ranking[i].product == product) return static_cast<int>(i + 1);
    }
    return 0;
}

StimulusRank outlier_rank(const CorpusItem& item) {
    if (!item.spec.outlier) throw InvalidArgument("detection_report: stimulus '" + item.spec.query + "' has no outlier");
    const auto& o = *item.spec.outlier;
    const auto ranking = rank_outliers(aoi_saliency(item.map, item.layout), stimulus::display_kind(o.feature));
    return {item.model, stimulus::to_string(o.feature), o.position, rank_of(ranking, o.position)};
}

std::vector<Detection> detection_report(const std::vector<StimulusRank>& ranks, int k) {
    if (k < 1) throw InvalidArgument("detection_report: k must be >= 1");
    std::map<std::tuple<std::string, std::string, int>, Detection> rows;
    for (const StimulusRank& r : ranks) {
        Detection& d = rows[{r.model, r.feature, r.position}];
        d.model = r.model;
        d.feature = r.feature;
        d.position = r.position;
        d.k = k;
        ++d.total;
        if (r.rank >= 1 && r.rank <= k) ++d.hits;
    }
    std::vector<Detection> out;
    for (auto& [key, d] : rows) {
        d.hit_rate = static_cast<double>(d.hits) / d.total;
        out.push_back(d);
    }
    return out;
}

std::vector<Detection> detection_report(const std::vector<CorpusItem>& corpus, int k) {
    std::vector<StimulusRank> ranks;
    ranks.reserve(corpus.size());
    for (const CorpusItem& item : corpus) ranks.push_back(outlier_rank(item));
    return detection_report(ranks, k);
}

} // namespace listsal::scoring
