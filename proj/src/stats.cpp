#include "listsal/stats.hpp"
#include "listsal/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace listsal::stats {

namespace {

void check_finite(const std::vector<Samples>& groups, const char* who) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (double v : groups[g]) {
            if (!std::isfinite(v)) {
                throw InvalidArgument(std::string(who) + ": non-finite value in group " + std::to_string(g));
            }
        }
    }
}

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

} // namespace

TestResult kruskal_wallis(const std::vector<Samples>& groups) {
    if (groups.size() < 2) throw InvalidArgument("kruskal_wallis: need at least 2 groups");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw InvalidArgument("kruskal_wallis: group " + std::to_string(g) + " is empty");
    }
    check_finite(groups, "kruskal_wallis");

    struct Item {
        double value;
        std::size_t group;
    };
    std::vector<Item> pooled;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (double v : groups[g]) pooled.push_back({v, g});
    }
    std::stable_sort(pooled.begin(), pooled.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

    const auto n = static_cast<double>(pooled.size());
    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1].value == pooled[i].value) ++j;
        // ranks i+1 .. j+1 share their average
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank_sum[pooled[k].group] += rank;
        const auto t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    TestResult r{"kruskal-wallis", 0.0, static_cast<double>(groups.size() - 1), 0.0, 1.0};
    const double correction = 1.0 - tie_term / (n * n * n - n);
    if (correction <= 0.0) return r; // every value tied
    double s = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        s += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
    }
    const double h = (12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / correction;
    r.statistic = std::max(h, 0.0);
    r.p_value = clamp_p(boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.df1), r.statistic)));
    return r;
}

TestResult one_way_anova(const std::vector<Samples>& groups) {
    using boost::multiprecision::cpp_rational;
    if (groups.size() < 2) throw InvalidArgument("one_way_anova: need at least 2 groups");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].size() < 2) {
            throw InvalidArgument("one_way_anova: group " + std::to_string(g) + " has fewer than 2 samples");
        }
    }
    check_finite(groups, "one_way_anova");

    cpp_rational total_sum = 0, total_sq = 0, between_raw = 0;
    std::size_t n = 0;
    for (const Samples& g : groups) {
        cpp_rational sum = 0;
        for (double v : g) {
            const cpp_rational x(v);
            sum += x;
            total_sq += x * x;
        }
        between_raw += sum * sum / static_cast<long long>(g.size());
        total_sum += sum;
        n += g.size();
    }
    const cpp_rational ss_between = between_raw - total_sum * total_sum / static_cast<long long>(n);
    const cpp_rational ss_within = total_sq - between_raw;
    if (ss_within == 0) throw InvalidArgument("one_way_anova: zero within-group variance, F undefined");

    const auto k = static_cast<long long>(groups.size());
    const auto nn = static_cast<long long>(n);
    const cpp_rational f = (ss_between / (k - 1)) / (ss_within / (nn - k));

    TestResult r{"one-way-anova", f.convert_to<double>(), static_cast<double>(k - 1), static_cast<double>(nn - k),
                 1.0};
    r.p_value = clamp_p(
        boost::math::cdf(boost::math::complement(boost::math::fisher_f(r.df1, r.df2), r.statistic)));
    return r;
}

double pearson(const Samples& x, const Samples& y) {
    if (x.size() != y.size()) throw InvalidArgument("pearson: samples differ in length");
    if (x.size() < 3) throw InvalidArgument("pearson: need at least 3 pairs");
    check_finite({x, y}, "pearson");
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TestResult pearson_test(const Samples& x, const Samples& y) {
    const double r = pearson(x, y);
    const double df = static_cast<double>(x.size()) - 2.0;
    TestResult out{"pearson", r, df, 0.0, 0.0};
    if (std::abs(r) < 1.0) {
        const double t = r * std::sqrt(df / (1.0 - r * r));
        out.p_value = clamp_p(
            2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::abs(t))));
    }
    return out;
}

std::string to_string(SearchFeature f) {
    switch (f) {
    case SearchFeature::tag: return "tag";
    case SearchFeature::star: return "star";
    case SearchFeature::price: return "price";
    }
    return "unknown";
}

SearchFeature parse_search_feature(std::string_view s) {
    if (s == "tag" || s == "discount_tag") return SearchFeature::tag;
    if (s == "star" || s == "star_rating") return SearchFeature::star;
    if (s == "price") return SearchFeature::price;
    throw InvalidArgument("unknown search feature '" + std::string(s) + "' (expected tag, star or price)");
}

AccuracyRule parse_accuracy_rule(std::string_view s) {
    if (s == "precision") return AccuracyRule::precision;
    if (s == "all-found" || s == "all_found") return AccuracyRule::all_found;
    throw InvalidArgument("unknown accuracy rule '" + std::string(s) + "' (expected precision or all-found)");
}

void SearchResponse::validate() const {
    const std::string who = "response of " + participant;
    if (task != "I" && task != "II") throw InvalidArgument(who + ": task must be I or II");
    if (outlier_positions.empty()) throw InvalidArgument(who + ": no outlier positions");
    if (selections.empty()) throw InvalidArgument(who + ": no selections");
    const auto in_range = [](int p) { return p >= 1 && p <= stimulus::kProductsPerPage; };
    for (int p : outlier_positions) {
        if (!in_range(p)) throw InvalidArgument(who + ": outlier position " + std::to_string(p) + " out of range");
    }
    for (const Selection& s : selections) {
        if (!in_range(s.position)) {
            throw InvalidArgument(who + ": selected position " + std::to_string(s.position) + " out of range");
        }
        if (!(s.rt_ms > 0.0) || !std::isfinite(s.rt_ms)) throw InvalidArgument(who + ": rt must be > 0");
    }
}

namespace {

std::vector<Selection> by_rt(const SearchResponse& r) {
    std::vector<Selection> s = r.selections;
    std::stable_sort(s.begin(), s.end(), [](const Selection& a, const Selection& b) { return a.rt_ms < b.rt_ms; });
    return s;
}

bool is_outlier(const SearchResponse& r, int position) {
    return std::find(r.outlier_positions.begin(), r.outlier_positions.end(), position) != r.outlier_positions.end();
}

} // namespace

SearchSummary search_summary(const std::vector<SearchResponse>& responses, AccuracyRule rule) {
    if (responses.empty()) throw InvalidArgument("search_summary: no responses");
    for (const SearchResponse& r : responses) r.validate();

    SearchSummary out;
    for (auto variant : {stimulus::Magnitude::type_i, stimulus::Magnitude::type_ii}) {
        for (auto feature : {SearchFeature::tag, SearchFeature::star, SearchFeature::price}) {
            Samples out1, out2;
            int trials = 0, selections = 0, correct = 0, all_found = 0, outliers = 0, found = 0;
            for (const SearchResponse& r : responses) {
                if (r.variant != variant || r.feature != feature) continue;
                ++trials;
                const auto sorted = by_rt(r);
                out1.push_back(sorted[0].rt_ms);
                if (sorted.size() >= 2) out2.push_back(sorted[1].rt_ms);
                std::vector<int> hit;
                for (const Selection& s : r.selections) {
                    ++selections;
                    if (is_outlier(r, s.position)) {
                        ++correct;
                        if (std::find(hit.begin(), hit.end(), s.position) == hit.end()) hit.push_back(s.position);
                    }
                }
                outliers += static_cast<int>(r.outlier_positions.size());
                found += static_cast<int>(hit.size());
                if (hit.size() == r.outlier_positions.size()) ++all_found;
            }
            if (trials == 0) continue;
            SearchCell cell;
            cell.variant = variant;
            cell.feature = feature;
            cell.trials = trials;
            cell.rt_out1 = gaze::summarize(std::move(out1));
            cell.rt_out2 = gaze::summarize(std::move(out2));
            cell.accuracy = rule == AccuracyRule::precision ? static_cast<double>(correct) / selections
                                                            : static_cast<double>(all_found) / trials;
            cell.recall = static_cast<double>(found) / outliers;
            out.cells.push_back(cell);
        }
    }
    for (auto feature : {SearchFeature::tag, SearchFeature::star, SearchFeature::price}) {
        const SearchCell* a = nullptr;
        const SearchCell* b = nullptr;
        for (const SearchCell& c : out.cells) {
            if (c.feature != feature) continue;
            (c.variant == stimulus::Magnitude::type_i ? a : b) = &c;
        }
        if (a && b) {
            out.increases.push_back(
                {feature, a->rt_out1.mean, b->rt_out1.mean, relative_increase(a->rt_out1.mean, b->rt_out1.mean)});
        }
    }
    return out;
}

std::vector<Samples> first_rt_by_feature(const std::vector<SearchResponse>& responses,
                                         stimulus::Magnitude variant) {
    std::vector<Samples> groups;
    for (auto feature : {SearchFeature::tag, SearchFeature::star, SearchFeature::price}) {
        Samples g;
        for (const SearchResponse& r : responses) {
            if (r.variant == variant && r.feature == feature) g.push_back(by_rt(r)[0].rt_ms);
        }
        if (!g.empty()) groups.push_back(std::move(g));
    }
    return groups;
}

double relative_increase(double before, double after) {
    if (before == 0.0) throw InvalidArgument("relative_increase: baseline is zero");
    return (after - before) / before * 100.0;
}

} // namespace listsal::stats
