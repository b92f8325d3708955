#include "support.hpp"

#include "listsal/formats.hpp"
#include "listsal/io.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace listsal;
namespace fs = std::filesystem;
using testing::run_cli;

namespace {

formats::Json read_json(const fs::path& p) { return formats::parse_json(testing::read(p), p.string()); }

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

bool mentions(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

std::string corpus(const std::string& name) { return testing::data_path("corpus/" + name).string(); }
std::string card(const std::string& name) { return testing::data_path("cards/" + name).string(); }

const std::string kSmallItti = R"({"pyramid_levels": 7, "center_levels": [1, 2], "deltas": [2, 3], "output_level": 2})";

} // namespace

TEST_CASE("render writes the image, layout and manifest") {
    const auto out = testing::scratch("cli_render");
    const auto r = run_cli({"--seed", "11", "--out", out.string(), "render", "--spec", corpus("phones_p3.json")});
    INFO(r.output);
    REQUIRE(r.code == 0);
    for (const char* f : {"render.png", "aoi.json", "manifest.json"}) CHECK(fs::exists(out / f));
    const auto m = read_json(out / "manifest.json");
    CHECK(m["command"] == "render");
    CHECK(m["seed"] == 11);
    CHECK(m["version"].is_string());
    CHECK(m["inputs"]["phones_p3.json"] == io::sha256_hex(io::read_file(corpus("phones_p3.json"))));
    CHECK(m["outputs"]["render.png"] == io::sha256_hex(io::read_file(out / "render.png")));
    CHECK(formats::layout_from_json(read_json(out / "aoi.json")) == stimulus::layout_for(15));
    const auto img = io::read_png(out / "render.png");
    CHECK(img.pixels == stimulus::render(testing::load_spec("phones_p3.json")).image.pixels);
}

TEST_CASE("render rejects a list without fifteen products") {
    const auto out = testing::scratch("cli_render_14");
    auto j = formats::to_json(testing::load_spec("chairs_p3.json"));
    j["products"].erase(j["products"].size() - 1);
    write(out / "short.json", formats::dump(j));
    const auto r = run_cli({"--out", (out / "o").string(), "render", "--spec", (out / "short.json").string()});
    CHECK(r.code == 2);
    CHECK(mentions(r.output, "15"));
}

TEST_CASE("render names the offending field") {
    const auto out = testing::scratch("cli_render_bad");
    auto j = formats::to_json(testing::load_spec("chairs_p3.json"));
    j["products"][3]["review_count"] = -4;
    write(out / "bad.json", formats::dump(j));
    const auto r = run_cli({"--out", (out / "o").string(), "render", "--spec", (out / "bad.json").string()});
    CHECK(r.code == 2);
    CHECK(mentions(r.output, "products[3]"));
}

TEST_CASE("rerunning a command reproduces its manifest") {
    const auto a = testing::scratch("cli_rerun_a");
    const auto b = testing::scratch("cli_rerun_b");
    for (const auto& dir : {a, b}) {
        REQUIRE(run_cli({"--out", dir.string(), "render", "--spec", corpus("monitors_p8.json")}).code == 0);
    }
    CHECK(testing::read(a / "manifest.json") == testing::read(b / "manifest.json"));
}

TEST_CASE("unknown model is a usage error") {
    const auto out = testing::scratch("cli_model");
    const auto r = run_cli({"--out", out.string(), "saliency", "--image", card("uniform_64.png"), "--model", "aim"});
    CHECK(r.code == 2);
    CHECK(mentions(r.output, "aim"));
}

TEST_CASE("saliency without a parameter file records defaults") {
    const auto out = testing::scratch("cli_defaults");
    const auto r = run_cli({"--out", out.string(), "saliency", "--image", card("test_card_64.png"), "--model", "gbvs"});
    INFO(r.output);
    REQUIRE(r.code == 0);
    const auto m = read_json(out / "manifest.json");
    CHECK(m["params_source"] == "defaults");
    CHECK(m["params"]["grid_width"] == gbvs::GbvsParams{}.grid_width);
    const auto map = io::decode_map_binary(io::read_file(out / "saliency_gbvs.bin"));
    CHECK(map.width == 64);
    CHECK(map.height == 64);
}

TEST_CASE("itti overlay of a uniform image is the zero-map blend") {
    const auto out = testing::scratch("cli_uniform");
    write(out / "p.json", kSmallItti);
    const auto r = run_cli({"--out", (out / "o").string(), "saliency", "--image", card("uniform_64.png"), "--model",
                            "itti", "--params", (out / "p.json").string()});
    INFO(r.output);
    REQUIRE(r.code == 0);
    const auto input = io::read_png(card("uniform_64.png"));
    const SaliencyMap zero{64, 64, std::vector<double>(64 * 64, 0.0)};
    CHECK(io::read_png(out / "o" / "overlay_itti.png").pixels == io::overlay(input, zero).pixels);
    CHECK(read_json(out / "o" / "manifest.json")["params_source"] == "file");
}

TEST_CASE("directional: gbvs overlay of the phone list is brightest on product 3's image") {
    const auto out = testing::scratch("cli_gbvs_phone");
    REQUIRE(run_cli({"--out", out.string(), "render", "--spec", corpus("phones_p3.json")}).code == 0);
    const auto r = run_cli({"--out", out.string(), "--jobs", "4", "saliency", "--image", (out / "render.png").string(),
                            "--model", "gbvs"});
    REQUIRE(r.code == 0);
    const auto overlay = io::read_png(out / "overlay_gbvs.png");
    const auto layout = formats::layout_from_json(read_json(out / "aoi.json"));
    auto lum = [&](int x, int y) {
        const auto c = overlay.at(x, y);
        return c.r + c.g + c.b;
    };
    int peak = 0;
    for (int y = 0; y < overlay.height; ++y) {
        for (int x = 0; x < overlay.width; ++x) peak = std::max(peak, lum(x, y));
    }
    const auto& rect = layout.find(3, stimulus::AoiKind::image)->rect;
    bool hit = false;
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
        for (int x = rect.x; x < rect.x + rect.w; ++x) hit = hit || lum(x, y) >= 0.95 * peak;
    }
    CHECK(hit);
}

TEST_CASE("analyze-gaze reproduces the golden tables") {
    const auto out = testing::scratch("cli_gaze");
    const auto r = run_cli({"--out", out.string(), "analyze-gaze", "--gaze",
                            testing::data_path("fixtures/cohort_gaze.csv").string(), "--aoi",
                            testing::data_path("fixtures/cohort_aoi.json").string(), "--grouping", "kind", "--grouping",
                            "position", "--grouping", "neighborhood", "--outlier-pos", "3"});
    INFO(r.output);
    REQUIRE(r.code == 0);
    for (const char* f : {"metrics.csv", "aggregate_kind.csv", "aggregate_position.csv", "aggregate_neighborhood.csv"}) {
        INFO(f);
        CHECK(testing::read(out / f) == testing::read(testing::golden_path(std::string("gaze/") + f)));
    }
    CHECK(fs::exists(out / "metrics.json"));
    CHECK(fs::exists(out / "aggregate_kind.json"));
}

TEST_CASE("analyze-gaze input errors") {
    const auto out = testing::scratch("cli_gaze_errors");
    const auto aoi = testing::data_path("fixtures/cohort_aoi.json").string();
    write(out / "empty.csv", "");
    CHECK(run_cli({"--out", (out / "o").string(), "analyze-gaze", "--gaze", (out / "empty.csv").string(), "--aoi", aoi})
              .code == 2);
    write(out / "header.csv", "participant_id,stimulus_id,timestamp_ms,x,y\n");
    CHECK(run_cli({"--out", (out / "o").string(), "analyze-gaze", "--gaze", (out / "header.csv").string(), "--aoi", aoi})
              .code == 2);

    const auto gaze = testing::data_path("fixtures/cohort_gaze.csv").string();
    const auto r = run_cli({"--out", (out / "o").string(), "analyze-gaze", "--gaze", gaze, "--aoi", aoi, "--grouping",
                            "neighborhood"});
    CHECK(r.code == 2);
    CHECK(mentions(r.output, "--outlier-pos"));

    write(out / "bad.csv", "participant_id,stimulus_id,timestamp_ms,x,y\nP1,s,0,10,10\nP1,s,40,10\nP1,s,80,10,10\n");
    const auto bad = run_cli({"--out", (out / "o").string(), "analyze-gaze", "--gaze", (out / "bad.csv").string(),
                              "--aoi", aoi});
    CHECK(bad.code == 2);
    CHECK(mentions(bad.output, "line 3"));

    CHECK(run_cli({"--out", (out / "o").string(), "analyze-gaze", "--gaze", (out / "missing.csv").string(), "--aoi",
                   aoi})
              .code == 3);
}

TEST_CASE("report on one detection file keeps its rows") {
    const auto out = testing::scratch("cli_report_det");
    formats::Json rows = formats::Json::array();
    rows.push_back(formats::to_json(scoring::Detection{"gbvs", "image", 3, 3, 1, 1, 1.0}));
    rows.push_back(formats::to_json(scoring::Detection{"gbvs", "price", 13, 3, 0, 1, 0.0}));
    write(out / "detection.json", formats::dump(formats::Json{{"k", 3}, {"detections", rows}, {"ranks", formats::Json::array()}}));
    const auto r = run_cli({"--out", (out / "o").string(), "report", (out / "detection.json").string()});
    INFO(r.output);
    REQUIRE(r.code == 0);
    const auto rep = read_json(out / "o" / "report.json");
    CHECK(rep["kind"] == "detection");
    CHECK(rep["detections"] == rows);
}

TEST_CASE("report pools metrics files") {
    const auto out = testing::scratch("cli_report_pool");
    const auto text = testing::read(testing::golden_path("gaze/metrics.csv"));
    std::istringstream in(text);
    std::string header, line, first = "", second = "";
    std::getline(in, header);
    while (std::getline(in, line)) {
        (line.rfind("P0", 0) == 0 ? first : second) += line + "\n";
    }
    write(out / "a.csv", header + "\n" + first);
    write(out / "b.csv", header + "\n" + second);
    const auto r = run_cli({"--out", (out / "o").string(), "report", (out / "a.csv").string(), (out / "b.csv").string(),
                            "--kw", "--outlier-pos", "3"});
    INFO(r.output);
    REQUIRE(r.code == 0);
    const auto rep = read_json(out / "o" / "report.json");
    const auto na = formats::read_metrics_csv(header + "\n" + first).size();
    const auto nb = formats::read_metrics_csv(header + "\n" + second).size();
    CHECK(rep["trials"] == na + nb);
    CHECK(rep["trials"] == 12);
    int units = 0;
    for (const auto& cell : rep["aggregates"]["kind"]) units += cell["units"].get<int>();
    CHECK(units == 12 * 45);
    CHECK(rep["tests"].size() == 2);
    CHECK(rep["aggregates"]["neighborhood"][0]["ttff_ms"]["mean"] == 25760.0);
}

TEST_CASE("report refuses mixed inputs") {
    const auto out = testing::scratch("cli_report_mixed");
    write(out / "d.json", R"({"k": 3, "detections": []})");
    const auto r = run_cli({"--out", (out / "o").string(), "report", (out / "d.json").string(),
                            testing::golden_path("gaze/metrics.csv").string()});
    CHECK(r.code == 2);
}

TEST_CASE("report on the response log prints the RT table") {
    const auto out = testing::scratch("cli_report_rt");
    const auto r = run_cli({"--out", out.string(), "report", testing::data_path("fixtures/responses.csv").string(),
                            "--anova"});
    REQUIRE(r.code == 0);
    const auto txt = testing::read(out / "report.txt");
    CHECK(mentions(txt, "370.14%"));
    CHECK(mentions(txt, "127.86%"));
    CHECK(mentions(txt, "26.73%"));
    CHECK(mentions(txt, "one-way-anova"));
}

TEST_CASE("missing input is an I/O error") {
    const auto out = testing::scratch("cli_missing");
    CHECK(run_cli({"--out", out.string(), "render", "--spec", (out / "nope.json").string()}).code == 3);
    CHECK(run_cli({"--out", out.string(), "--config", (out / "nope.json").string(), "saliency", "--image",
                   card("uniform_64.png"), "--model", "gbvs"})
              .code == 3);
}

TEST_CASE("non-convergence exits with 4") {
    const auto out = testing::scratch("cli_converge");
    write(out / "cfg.json", R"({"gbvs": {"max_iters": 1, "tol": 1e-300}})");
    const auto r = run_cli({"--out", (out / "o").string(), "--config", (out / "cfg.json").string(), "saliency",
                            "--image", card("test_card_64.png"), "--model", "gbvs"});
    INFO(r.output);
    CHECK(r.code == 4);
}

TEST_CASE("usage errors") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"render"}).code == 2);
    CHECK(run_cli({"--jobs", "0", "render", "--spec", corpus("phones_p3.json")}).code == 2);
    const auto v = run_cli({"--version"});
    CHECK(v.code == 0);
    CHECK_FALSE(v.output.empty());
}

TEST_CASE("generate writes a spec that renders") {
    const auto out = testing::scratch("cli_generate");
    const auto r = run_cli({"--seed", "22", "--out", out.string(), "generate", "--query", "chairs", "--feature", "price",
                            "--position", "13", "--name", "c.json"});
    REQUIRE(r.code == 0);
    const auto spec = formats::stimulus_from_json(read_json(out / "c.json"));
    CHECK(spec == stimulus::make_stimulus("chairs", 22,
                                          stimulus::OutlierSpec{stimulus::OutlierFeature::price, 13,
                                                                stimulus::Magnitude::type_i}));
    CHECK(run_cli({"--out", out.string(), "generate", "--position", "3"}).code == 2);
}
