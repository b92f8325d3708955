#include "support.hpp"

#include "listsal/error.hpp"
#include "listsal/gbvs.hpp"
#include "listsal/imaging.hpp"
#include "listsal/itti.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace listsal;
using namespace listsal::itti;

namespace {

std::pair<int, int> argmax(const SaliencyMap& m) {
    const auto it = std::max_element(m.values.begin(), m.values.end());
    const auto i = static_cast<int>(it - m.values.begin());
    return {i % m.width, i / m.width};
}

// Small images need a shallower pyramid than the 9-level default.
IttiParams small_params() {
    IttiParams p;
    p.pyramid_levels = 7;
    p.center_levels = {1, 2};
    p.deltas = {2, 3};
    p.output_level = 2;
    return p;
}

} // namespace

TEST_CASE("uniform gray image gives an all-zero map") {
    const auto map = itti_saliency(testing::load_card("uniform_64.png"), small_params());
    CHECK(map.width == 64);
    CHECK(map.height == 64);
    CHECK(*std::max_element(map.values.begin(), map.values.end()) < 1e-9);
}

TEST_CASE("uniform image gives zero conspicuity for every group") {
    const auto img = RasterImage::filled(64, 64, 0.3, 0.6, 0.2);
    for (auto g : {FeatureGroup::intensity, FeatureGroup::color, FeatureGroup::orientation}) {
        const auto c = conspicuity_map(img, g, small_params());
        for (double v : c.values) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("bright disc is localised within 12 px") {
    const auto map = itti_saliency(testing::load_card("bright_disc_256.png"));
    const auto [x, y] = argmax(map);
    CHECK(std::hypot(x - 128.0, y - 128.0) <= 12.0);
}

TEST_CASE("colour conspicuity peaks inside a red square on gray") {
    const auto img = testing::load_card("red_square_128.png");
    const auto p = small_params();
    const auto c = conspicuity_map(img, FeatureGroup::color, p);
    const auto up = SaliencyMap::from_plane(imaging::resize(c, img.width(), img.height()));
    const auto [x, y] = argmax(up);
    CHECK(x >= 72);
    CHECK(x < 96);
    CHECK(y >= 40);
    CHECK(y < 64);
}

TEST_CASE("saliency is the rescaled mean of the three conspicuity maps") {
    std::mt19937_64 rng(9);
    const auto img = testing::random_image(rng, 96, 80);
    const auto p = small_params();
    const auto a = conspicuity_map(img, FeatureGroup::intensity, p);
    const auto b = conspicuity_map(img, FeatureGroup::color, p);
    const auto c = conspicuity_map(img, FeatureGroup::orientation, p);
    FeatureChannel mean = a;
    for (std::size_t i = 0; i < mean.size(); ++i) mean.values[i] = (a.values[i] + b.values[i] + c.values[i]) / 3.0;
    const auto expect = SaliencyMap::from_plane(imaging::resize(mean, 96, 80));
    const auto got = itti_saliency(img, p);
    REQUIRE(got.values.size() == expect.values.size());
    for (std::size_t i = 0; i < got.values.size(); ++i) CHECK(std::abs(got.values[i] - expect.values[i]) < 1e-9);
}

TEST_CASE("output dimensions equal input dimensions") {
    std::mt19937_64 rng(1);
    for (auto [w, h] : {std::pair{130, 97}, {64, 200}}) {
        const auto m = itti_saliency(testing::random_image(rng, w, h), small_params());
        CHECK(m.width == w);
        CHECK(m.height == h);
    }
}

TEST_CASE("horizontal flip equivariance on random images") {
    std::mt19937_64 rng(21);
    for (auto [w, h] : {std::pair{96, 96}, {101, 77}}) {
        const auto img = testing::random_image(rng, w, h);
        const auto a = itti_saliency(img, small_params()).flipped_horizontally();
        const auto b = itti_saliency(img.flipped_horizontally(), small_params());
        for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);
    }
}

TEST_CASE("adding a constant to RGB leaves intensity centre-surround maps unchanged") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 0.7);
    const int w = 80, h = 72;
    std::vector<double> r(w * h), g(w * h), b(w * h);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = u(rng), g[i] = u(rng), b[i] = u(rng);
    auto shifted = [](std::vector<double> v) {
        for (double& x : v) x += 0.25;
        return v;
    };
    const RasterImage a(w, h, r, g, b);
    const RasterImage c(w, h, shifted(r), shifted(g), shifted(b));
    const auto p = small_params();
    const auto ma = feature_maps(imaging::extract_channels(a)[0], p);
    const auto mc = feature_maps(imaging::extract_channels(c)[0], p);
    REQUIRE(ma.size() == 4);
    for (std::size_t k = 0; k < ma.size(); ++k) {
        for (std::size_t i = 0; i < ma[k].size(); ++i) CHECK(std::abs(ma[k].values[i] - mc[k].values[i]) < 1e-9);
    }
}

TEST_CASE("directional: monitor list map is flatter than the GBVS map") {
    const auto img = RasterImage::from_rgb8(stimulus::render(testing::load_spec("monitors_p8.json")).image);
    const double hi = itti_saliency(img).entropy();
    const double hg = gbvs::gbvs_saliency(img).entropy();
    INFO("itti entropy " << hi << ", gbvs entropy " << hg);
    CHECK(hi > hg);
}

TEST_CASE("identical input gives bit-identical output") {
    const auto img = RasterImage::from_rgb8(
        stimulus::render(testing::load_spec("monitors_p8.json")).image);
    CHECK(itti_saliency(img).values == itti_saliency(img).values);
}

TEST_CASE("default parameters fit a rendered page") {
    const auto r = stimulus::render(testing::load_spec("phones_p3.json"));
    const auto m = itti_saliency(RasterImage::from_rgb8(r.image));
    CHECK(m.width == r.image.width);
    CHECK(*std::max_element(m.values.begin(), m.values.end()) == 1.0);
}

TEST_CASE("inconsistent parameters are rejected") {
    IttiParams p;
    p.deltas = {5};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = IttiParams{};
    p.output_level = 9;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CHECK_THROWS_AS(itti_saliency(RasterImage::filled(64, 64, 0.5, 0.5, 0.5)), InvalidArgument);
}
