#pragma once

// Hypothesis tests and the visual-search response summaries.

#include "listsal/gaze.hpp"
#include "listsal/stimulus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace listsal::stats {

using Samples = std::vector<double>;

struct TestResult {
    std::string method;
    double statistic = 0.0;
    double df1 = 0.0;
    double df2 = 0.0; // 0 when the reference distribution has one df
    double p_value = 1.0;
};

/// H with tie correction; p from chi-square with k-1 df. All-tied data give
/// H = 0, p = 1.
TestResult kruskal_wallis(const std::vector<Samples>& groups);

/// Sums of squares are accumulated in exact rational arithmetic, so F is the
/// correctly computed value of the data as given (and identical for any data
/// set that is an exact affine image of it).
TestResult one_way_anova(const std::vector<Samples>& groups);

double pearson(const Samples& x, const Samples& y);

/// r with a two-sided t-test on n-2 df; statistic holds r.
TestResult pearson_test(const Samples& x, const Samples& y);

enum class SearchFeature { tag, star, price };

std::string to_string(SearchFeature f);
SearchFeature parse_search_feature(std::string_view s);

struct Selection {
    int position = 1;
    double rt_ms = 0.0;
};

/// One participant's answers to one list.
struct SearchResponse {
    std::string participant;
    std::string task; // "I" or "II"
    stimulus::Magnitude variant = stimulus::Magnitude::type_i;
    SearchFeature feature = SearchFeature::tag;
    std::vector<int> outlier_positions;
    std::vector<Selection> selections;

    void validate() const;
};

enum class AccuracyRule {
    precision,      // correct selections / all selections
    all_found,      // trials in which every true outlier was selected / trials
};

AccuracyRule parse_accuracy_rule(std::string_view s);

struct SearchCell {
    stimulus::Magnitude variant = stimulus::Magnitude::type_i;
    SearchFeature feature = SearchFeature::tag;
    int trials = 0;
    gaze::Summary rt_out1; // first selection by rt
    gaze::Summary rt_out2; // second selection by rt, trials with >= 2 selections
    double accuracy = 0.0;
    double recall = 0.0;
};

struct RelativeIncrease {
    SearchFeature feature = SearchFeature::tag;
    double type_i_mean = 0.0;
    double type_ii_mean = 0.0;
    double percent = 0.0; // (typeII - typeI) / typeI * 100 on mean out.1 RT
};

struct SearchSummary {
    std::vector<SearchCell> cells; // typeI before typeII; tag, star, price
    std::vector<RelativeIncrease> increases;
};

SearchSummary search_summary(const std::vector<SearchResponse>& responses,
                             AccuracyRule rule = AccuracyRule::precision);

/// Out.1 RTs of one variant grouped by feature (tag, star, price), skipping
/// features without trials. Input to the ANOVA across features.
std::vector<Samples> first_rt_by_feature(const std::vector<SearchResponse>& responses,
                                         stimulus::Magnitude variant);

double relative_increase(double before, double after);

} // namespace listsal::stats
