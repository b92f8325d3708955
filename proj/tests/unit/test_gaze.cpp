#include "oracles.hpp"
#include "support.hpp"

#include "listsal/error.hpp"
#include "listsal/gaze.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace listsal;
using namespace listsal::gaze;

namespace {

std::vector<GazeSample> steady(std::int64_t t0, int n, std::int64_t step, double x, double y) {
    std::vector<GazeSample> s;
    for (int i = 0; i < n; ++i) s.push_back({"p", "s", t0 + i * step, x, y});
    return s;
}

Fixation at(const AoiLayout& layout, int product, AoiKind kind, std::int64_t start, std::int64_t duration) {
    const stimulus::Rect& r = layout.find(product, kind)->rect;
    return {r.x + r.w / 2.0, r.y + r.h / 2.0, start, duration, 3};
}

void check_same(const std::vector<Fixation>& a, const std::vector<Fixation>& b, double tol = 1e-9) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].start == b[i].start);
        CHECK(a[i].duration == b[i].duration);
        CHECK(a[i].sample_count == b[i].sample_count);
        CHECK(std::abs(a[i].x - b[i].x) < tol);
        CHECK(std::abs(a[i].y - b[i].y) < tol);
    }
}

void check_same(const std::vector<AoiMetrics>& a, const std::vector<AoiMetrics>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].key == b[i].key);
        CHECK(a[i].ttff == b[i].ttff);
        CHECK(a[i].fixation_count == b[i].fixation_count);
        CHECK(a[i].time_spent == b[i].time_spent);
        CHECK(a[i].revisit_count == b[i].revisit_count);
    }
}

Trial trial_with(const std::string& pid, const AoiLayout& layout, std::vector<Fixation> fx) {
    return {pid, "s", compute_aoi_metrics(fx, layout)};
}

} // namespace

TEST_CASE("steady gaze is one fixation") {
    const auto fx = detect_fixations(steady(0, 20, 50, 400, 300));
    REQUIRE(fx.size() == 1);
    CHECK(fx[0].start == 0);
    CHECK(fx[0].duration == 950);
    CHECK(fx[0].sample_count == 20);
    CHECK(fx[0].x == 400.0);
    CHECK(fx[0].y == 300.0);
}

TEST_CASE("two separated clusters give two fixations") {
    auto s = steady(0, 10, 20, 100, 100);
    for (auto& g : steady(200, 10, 20, 600, 900)) s.push_back(g);
    const auto fx = detect_fixations(s);
    REQUIRE(fx.size() == 2);
    CHECK(fx[0].start == 0);
    CHECK(fx[0].duration == 180);
    CHECK(fx[1].start == 200);
    CHECK(fx[1].x == 600.0);
}

TEST_CASE("short dwell is dropped") {
    const auto fx = detect_fixations(steady(0, 4, 30, 10, 10));
    CHECK(fx.empty());
    FixationParams p;
    p.min_duration = 90;
    CHECK(detect_fixations(steady(0, 4, 30, 10, 10), p).size() == 1);
}

TEST_CASE("dispersion bound is inclusive") {
    std::vector<GazeSample> s{{"p", "s", 0, 0, 0}, {"p", "s", 60, 60, 40}, {"p", "s", 120, 0, 0}};
    CHECK(detect_fixations(s).size() == 1);
    s[1].x = 60.5;
    CHECK(detect_fixations(s).empty());
}

TEST_CASE("trace validation") {
    auto s = steady(0, 5, 40, 1, 1);
    s[3].t = s[2].t;
    CHECK_THROWS_AS(detect_fixations(s), InvalidArgument);
    s = steady(0, 5, 40, 1, 1);
    std::swap(s[1], s[2]);
    CHECK_THROWS_AS(detect_fixations(s), InvalidArgument);
    s = steady(kTrialDurationMs - 40, 3, 40, 1, 1);
    CHECK_THROWS_AS(detect_fixations(s), InvalidArgument);
    s = steady(0, 3, 40, 1, 1);
    s[1].participant = "q";
    CHECK_THROWS_AS(detect_fixations(s), InvalidArgument);
    FixationParams p;
    p.dispersion = -1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("detection matches the brute-force oracle on random traces") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s = oracle::random_trace(rng, 800, 2400, 300);
        for (double d : {30.0, 100.0}) {
            check_same(detect_fixations(s, {d, 100}), oracle::fixations(s, d, 100));
        }
    }
}

TEST_CASE("single fixation on an AOI") {
    const auto layout = stimulus::layout_for(15);
    const auto m = compute_aoi_metrics({at(layout, 4, AoiKind::price, 1200, 300)}, layout);
    for (const auto& a : m) {
        if (a.key == AoiKey{4, AoiKind::price}) {
            CHECK(a.ttff == 1200);
            CHECK(a.fixation_count == 1);
            CHECK(a.time_spent == 300);
            CHECK(a.revisit_count == 0);
        } else {
            CHECK_FALSE(a.ttff.has_value());
            CHECK(a.fixation_count == 0);
            CHECK(a.time_spent == 0);
        }
    }
}

TEST_CASE("leaving and returning counts one revisit") {
    const auto layout = stimulus::layout_for(15);
    const std::vector<Fixation> fx{at(layout, 1, AoiKind::image, 100, 200), at(layout, 1, AoiKind::image, 320, 100),
                                   at(layout, 2, AoiKind::image, 500, 250), at(layout, 1, AoiKind::image, 900, 150)};
    const auto m = compute_aoi_metrics(fx, layout);
    const auto& a = m[static_cast<std::size_t>(aoi_index_at(layout, fx[0].x, fx[0].y))];
    CHECK(a.ttff == 100);
    CHECK(a.fixation_count == 3);
    CHECK(a.time_spent == 450);
    CHECK(a.revisit_count == 1);
}

TEST_CASE("a fixation off every AOI breaks a run") {
    const auto layout = stimulus::layout_for(15);
    auto off = at(layout, 1, AoiKind::image, 300, 100);
    off.x = -5;
    const std::vector<Fixation> fx{at(layout, 1, AoiKind::image, 100, 100), off, at(layout, 1, AoiKind::image, 500, 100)};
    const auto m = compute_aoi_metrics(fx, layout);
    CHECK(m[static_cast<std::size_t>(aoi_index_at(layout, fx[0].x, fx[0].y))].revisit_count == 1);
}

TEST_CASE("metrics match the oracle on 500 random fixations") {
    std::mt19937_64 rng(5);
    const auto layout = stimulus::layout_for(15);
    std::uniform_real_distribution<double> ux(-20, 820), uy(-20, 2420);
    std::uniform_int_distribution<int> dur(100, 700), gap(0, 200), stay(0, 2);
    std::vector<Fixation> fx;
    std::int64_t t = 0;
    for (int i = 0; i < 500; ++i) {
        Fixation f{ux(rng), uy(rng), t, dur(rng), 3};
        if (!fx.empty() && stay(rng) == 0) f.x = fx.back().x, f.y = fx.back().y;
        fx.push_back(f);
        t += f.duration + gap(rng);
    }
    check_same(compute_aoi_metrics(fx, layout), oracle::metrics(fx, layout));
}

TEST_CASE("metric invariants hold on random traces") {
    std::mt19937_64 rng(77);
    const auto layout = stimulus::layout_for(15);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = oracle::random_trace(rng, 800, 2400, 350);
        if (s.empty()) continue;
        const auto fx = detect_fixations(s);
        const auto m = compute_aoi_metrics(fx, layout);
        std::int64_t total = 0;
        for (const auto& a : m) {
            total += a.time_spent;
            CHECK(a.revisit_count <= std::max(a.fixation_count - 1, 0));
            CHECK(a.ttff.has_value() == (a.fixation_count > 0));
            if (a.ttff) CHECK(*a.ttff >= s.front().t);
        }
        CHECK(total <= s.back().t - s.front().t);

        // fixations that end before a cut do not change when the trace is truncated
        const std::size_t cut = s.size() / 2;
        const std::vector<GazeSample> prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(cut));
        const auto pf = detect_fixations(prefix);
        std::vector<Fixation> stable;
        for (const auto& f : fx) {
            if (f.start + f.duration < prefix.back().t) stable.push_back(f);
        }
        REQUIRE(pf.size() >= stable.size());
        check_same(std::vector<Fixation>(pf.begin(), pf.begin() + static_cast<std::ptrdiff_t>(stable.size())), stable);
    }
}

TEST_CASE("translating a trace translates its fixations") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_trace(rng, 800, 2400, 300);
        auto moved = s;
        for (auto& g : moved) g.x += 37.25, g.y -= 112.5;
        const auto a = detect_fixations(s);
        auto b = detect_fixations(moved);
        for (auto& f : b) f.x -= 37.25, f.y += 112.5;
        check_same(a, b);
    }
}

TEST_CASE("summaries") {
    const auto s = summarize({100, 300, 200});
    CHECK(s.mean == 200.0);
    CHECK(s.median == 200.0);
    CHECK(s.n == 3);
    CHECK(summarize({1, 2, 3, 10}).median == 2.5);
    CHECK(std::isnan(summarize({}).mean));
}

TEST_CASE("aggregation by kind averages over participants and drops missing ttff") {
    const auto layout = stimulus::layout_for(15);
    std::vector<Trial> trials{
        trial_with("a", layout, {at(layout, 1, AoiKind::image, 100, 200)}),
        trial_with("b", layout, {at(layout, 2, AoiKind::image, 300, 200)}),
    };
    const auto cells = aggregate_metrics(trials, {});
    REQUIRE(cells.size() == 3);
    CHECK(cells[0].group == "image");
    CHECK(cells[0].units == 30);
    CHECK(cells[0].fixated == 2);
    CHECK(cells[0].ttff.mean == 200.0);
    CHECK(cells[0].ttff.n == 2);
    CHECK(cells[0].time_spent.mean == doctest::Approx(400.0 / 30));
    CHECK(cells[1].fixated == 0);
    CHECK(std::isnan(cells[1].ttff.mean));
    const auto values = group_values(trials, {}, "ttff");
    CHECK(values[0] == std::vector<double>{100, 300});
    CHECK(group_values(trials, {}, "time_spent")[0].size() == 30);
}

TEST_CASE("position and neighborhood cells") {
    const auto layout = stimulus::layout_for(15);
    const std::vector<Trial> trials{trial_with("a", layout, {})};
    const auto pos = aggregate_metrics(trials, {Grouping::position, {}, DistantRule::ring});
    REQUIRE(pos.size() == 15);
    CHECK(pos[14].group == "15");
    CHECK(pos[14].units == 3);
    CHECK_THROWS_AS(aggregate_metrics(trials, {Grouping::neighborhood, {}, DistantRule::ring}), InvalidArgument);
    const auto ring = aggregate_metrics(trials, {Grouping::neighborhood, 1, DistantRule::ring});
    CHECK(ring[0].units == 6);
    CHECK(ring[1].units == 3);
    const auto rest = aggregate_metrics(trials, {Grouping::neighborhood, 8, DistantRule::rest});
    CHECK(rest[0].units == 9);
    CHECK(rest[1].units == 36);
}

TEST_CASE("neighbor sets at the list edges") {
    auto g = neighbor_grouping(1);
    CHECK(g.near == std::vector<int>{1, 2});
    CHECK(g.distant == std::vector<int>{3});
    g = neighbor_grouping(8);
    CHECK(g.near == std::vector<int>{7, 8, 9});
    CHECK(g.distant == std::vector<int>{6, 10});
    CHECK(neighbor_grouping(15, 15, DistantRule::rest).distant.size() == 13);
    CHECK_THROWS_AS(neighbor_grouping(16), InvalidArgument);
}

TEST_CASE("trials on different layouts are not pooled") {
    const auto a = stimulus::layout_for(15), b = stimulus::layout_for(14);
    const std::vector<Trial> trials{trial_with("a", a, {}), trial_with("b", b, {})};
    CHECK_THROWS_AS(aggregate_metrics(trials, {}), InvalidArgument);
}

TEST_CASE("bundled cohort: near and distant ttff means") {
    const auto trials = testing::cohort_trials();
    CHECK(trials.size() == 12);
    const auto cells = aggregate_metrics(trials, {Grouping::neighborhood, 3, DistantRule::ring});
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].ttff.mean == 25760.0);
    CHECK(cells[1].ttff.mean == 31240.0);
}

TEST_CASE("bundled cohort: fixations agree with the oracle") {
    const auto samples = formats::read_gaze_csv(testing::read(testing::data_path("fixtures/cohort_gaze.csv")));
    for (const auto& [key, trace] : split_traces(samples)) {
        INFO(key.first);
        check_same(detect_fixations(trace), oracle::fixations(trace, 100, 100));
    }
}
