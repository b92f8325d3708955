// listsal: command-line front end.
//
// Exit codes: 0 ok, 2 usage or validation error, 3 I/O error, 4 a solver did
// not converge.

#include "listsal/error.hpp"
#include "listsal/formats.hpp"
#include "listsal/gaze.hpp"
#include "listsal/gbvs.hpp"
#include "listsal/io.hpp"
#include "listsal/itti.hpp"
#include "listsal/scoring.hpp"
#include "listsal/stats.hpp"
#include "listsal/stimulus.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#ifndef LISTSAL_VERSION
#define LISTSAL_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace listsal;
using formats::Json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
};

struct Settings {
    itti::IttiParams itti;
    gbvs::GbvsParams gbvs;
    gaze::FixationParams fixation;
    int k = 3;
    bool from_config = false;
};

Settings load_settings(const Globals& g) {
    Settings s;
    if (g.config_path.empty()) return s;
    const Json j = formats::parse_json(io::read_text(g.config_path), "config");
    if (!j.is_object()) throw InvalidArgument("config: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "itti") {
            formats::update_from_json(s.itti, *it);
        } else if (key == "gbvs") {
            formats::update_from_json(s.gbvs, *it);
        } else if (key == "gaze") {
            formats::update_from_json(s.fixation, *it);
        } else if (key == "k") {
            if (!it->is_number_integer() || it->get<int>() < 1) throw InvalidArgument("config.k: expected integer >= 1");
            s.k = it->get<int>();
        } else if (key != "seed" && key != "jobs") {
            throw InvalidArgument("config." + key + ": unknown field");
        }
    }
    s.from_config = true;
    return s;
}

/// Collects hashes of everything a command read and wrote.
class Manifest {
public:
    Manifest(std::string command, const Globals& g) : out_(g.out_dir) {
        j_["tool"] = "listsal";
        j_["version"] = LISTSAL_VERSION;
        j_["command"] = std::move(command);
        j_["seed"] = g.seed;
        j_["inputs"] = Json::object();
        j_["outputs"] = Json::object();
        fs::create_directories(out_);
    }

    Json& operator[](const std::string& key) { return j_[key]; }

    io::Bytes input(const std::string& path) {
        io::Bytes data = io::read_file(path);
        j_["inputs"][fs::path(path).filename().string()] = io::sha256_hex(data);
        return data;
    }

    std::string input_text(const std::string& path) {
        const io::Bytes data = input(path);
        return {data.begin(), data.end()};
    }

    void output(const std::string& name, const io::Bytes& data) {
        io::write_file_atomic(out_ / name, data);
        j_["outputs"][name] = io::sha256_hex(data);
    }

    void output(const std::string& name, const std::string& text) { output(name, io::Bytes(text.begin(), text.end())); }

    void finish() { io::write_text_atomic(out_ / "manifest.json", formats::dump(j_)); }

private:
    fs::path out_;
    Json j_;
};

std::string fixed(double v, int decimals) {
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}

std::string padr(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

// generate -----------------------------------------------------------------

struct GenerateArgs {
    std::string query = "phones";
    std::string feature;
    int position = 0;
    std::string magnitude = "typeI";
    std::string name = "spec.json";
};

int cmd_generate(const Globals& g, const GenerateArgs& a) {
    std::optional<stimulus::OutlierSpec> outlier;
    if (!a.feature.empty()) {
        outlier = stimulus::OutlierSpec{stimulus::parse_feature(a.feature), a.position,
                                        stimulus::parse_magnitude(a.magnitude)};
    } else if (a.position != 0) {
        throw InvalidArgument("--position needs --feature");
    }
    const auto spec = stimulus::make_stimulus(a.query, g.seed, outlier);
    Manifest m("generate", g);
    m.output(a.name, formats::dump(formats::to_json(spec)));
    m.finish();
    return 0;
}

// render -------------------------------------------------------------------

int cmd_render(const Globals& g, const std::string& spec_path) {
    Manifest m("render", g);
    const auto spec = formats::stimulus_from_json(formats::parse_json(m.input_text(spec_path), spec_path));
    const auto r = stimulus::render(spec);
    m["spec_seed"] = spec.seed;
    m.output("render.png", io::encode_png_rgb(r.image));
    m.output("aoi.json", formats::dump(formats::to_json(r.layout)));
    m.finish();
    return 0;
}

// saliency -----------------------------------------------------------------

struct SaliencyArgs {
    std::string image;
    std::string model;
    std::string params;
};

int cmd_saliency(const Globals& g, const SaliencyArgs& a) {
    if (a.model != "itti" && a.model != "gbvs") {
        throw InvalidArgument("unknown model '" + a.model + "' (expected itti or gbvs)");
    }
    Settings s = load_settings(g);
    Manifest m("saliency", g);
    const Rgb8Image input = io::decode_png(m.input(a.image));
    std::string source = s.from_config ? "config" : "defaults";
    if (!a.params.empty()) {
        const Json pj = formats::parse_json(m.input_text(a.params), a.params);
        if (a.model == "itti") formats::update_from_json(s.itti, pj);
        else formats::update_from_json(s.gbvs, pj);
        source = "file";
    }
    const RasterImage raster = RasterImage::from_rgb8(input);
    SaliencyMap map;
    if (a.model == "itti") {
        map = itti::itti_saliency(raster, s.itti);
        m["params"] = formats::to_json(s.itti);
    } else {
        map = gbvs::gbvs_saliency(raster, s.gbvs, g.jobs);
        m["params"] = formats::to_json(s.gbvs);
    }
    m["model"] = a.model;
    m["params_source"] = source;
    m.output("saliency_" + a.model + ".png", io::encode_map_png(map));
    m.output("saliency_" + a.model + ".bin", io::encode_map_binary(map));
    m.output("overlay_" + a.model + ".png", io::encode_png_rgb(io::overlay(input, map)));
    m.finish();
    return 0;
}

// score --------------------------------------------------------------------

struct ScoreArgs {
    std::string model;
    std::vector<std::string> specs;
    std::vector<std::string> aois;
    std::vector<std::string> maps;
    int k = 0;
};

int cmd_score(const Globals& g, const ScoreArgs& a) {
    const Settings s = load_settings(g);
    if (a.specs.size() != a.aois.size() || a.specs.size() != a.maps.size()) {
        throw InvalidArgument("--spec, --aoi and --map must be given the same number of times");
    }
    if (a.specs.empty()) throw InvalidArgument("score needs at least one --spec/--aoi/--map triple");
    const int k = a.k > 0 ? a.k : s.k;
    Manifest m("score", g);
    Json items = Json::array();
    std::vector<scoring::StimulusRank> ranks;
    for (std::size_t i = 0; i < a.specs.size(); ++i) {
        scoring::CorpusItem item;
        item.model = a.model;
        item.spec = formats::stimulus_from_json(formats::parse_json(m.input_text(a.specs[i]), a.specs[i]));
        item.layout = formats::layout_from_json(formats::parse_json(m.input_text(a.aois[i]), a.aois[i]));
        item.map = io::decode_map_binary(m.input(a.maps[i]));
        const auto scores = scoring::aoi_saliency(item.map, item.layout);
        Json entry{{"spec", fs::path(a.specs[i]).filename().string()}, {"query", item.spec.query}};
        if (item.spec.outlier) {
            const auto kind = stimulus::display_kind(item.spec.outlier->feature);
            const auto ranking = scoring::rank_outliers(scores, kind);
            const auto r = scoring::outlier_rank(item);
            ranks.push_back(r);
            entry["outlier"] = {{"feature", r.feature}, {"position", r.position}, {"kind", stimulus::to_string(kind)},
                                {"rank", r.rank}};
            entry["ranking"] = formats::to_json(ranking);
        }
        entry["aois"] = formats::to_json(scores);
        items.push_back(entry);
    }
    Json detections = Json::array();
    for (const auto& d : scoring::detection_report(ranks, k)) detections.push_back(formats::to_json(d));
    Json rank_rows = Json::array();
    for (const auto& r : ranks) {
        rank_rows.push_back({{"model", r.model}, {"feature", r.feature}, {"position", r.position}, {"rank", r.rank}});
    }
    m["model"] = a.model;
    m["k"] = k;
    m.output("scores.json", formats::dump(Json{{"model", a.model}, {"items", items}}));
    m.output("detection.json", formats::dump(Json{{"k", k}, {"detections", detections}, {"ranks", rank_rows}}));
    m.finish();
    return 0;
}

// analyze-gaze ---------------------------------------------------------------

struct GazeArgs {
    std::string gaze;
    std::string aoi;
    std::vector<std::string> groupings;
    int outlier_pos = 0;
    std::string distant = "ring";
    std::optional<double> dispersion;
    std::optional<std::int64_t> min_duration;
};

int cmd_analyze_gaze(const Globals& g, const GazeArgs& a) {
    Settings s = load_settings(g);
    std::vector<gaze::Grouping> groupings;
    for (const auto& name : a.groupings) groupings.push_back(gaze::parse_grouping(name));
    if (groupings.empty()) groupings.push_back(gaze::Grouping::kind);
    for (auto gr : groupings) {
        if (gr == gaze::Grouping::neighborhood && a.outlier_pos == 0) {
            throw InvalidArgument("--grouping neighborhood requires --outlier-pos");
        }
    }
    if (a.dispersion) s.fixation.dispersion = *a.dispersion;
    if (a.min_duration) s.fixation.min_duration = *a.min_duration;
    s.fixation.validate();
    const auto distant = gaze::parse_distant_rule(a.distant);

    Manifest m("analyze-gaze", g);
    const auto samples = formats::read_gaze_csv(m.input_text(a.gaze));
    if (samples.empty()) throw InvalidArgument("gaze CSV: no samples");
    const auto layout = formats::layout_from_json(formats::parse_json(m.input_text(a.aoi), a.aoi));

    std::vector<gaze::Trial> trials;
    for (const auto& [key, trace] : gaze::split_traces(samples)) {
        std::vector<gaze::Fixation> fx;
        try {
            fx = gaze::detect_fixations(trace, s.fixation);
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("trace " + key.first + "/" + key.second + ": " + e.what());
        }
        trials.push_back({key.first, key.second, gaze::compute_aoi_metrics(fx, layout)});
    }

    m["fixation"] = formats::to_json(s.fixation);
    m.output("metrics.csv", formats::write_metrics_csv(trials));
    Json per_trial = Json::array();
    for (const auto& t : trials) {
        Json rows = Json::array();
        for (const auto& mt : t.metrics) {
            rows.push_back({{"product", mt.key.product},
                            {"kind", stimulus::to_string(mt.key.kind)},
                            {"ttff_ms", mt.ttff ? Json(*mt.ttff) : Json(nullptr)},
                            {"fixation_count", mt.fixation_count},
                            {"time_spent_ms", mt.time_spent},
                            {"revisit_count", mt.revisit_count}});
        }
        per_trial.push_back({{"participant", t.participant}, {"stimulus", t.stimulus}, {"aois", rows}});
    }
    m.output("metrics.json", formats::dump(per_trial));
    for (auto gr : groupings) {
        gaze::AggregateOptions opt{gr, std::nullopt, distant};
        if (a.outlier_pos) opt.outlier_position = a.outlier_pos;
        const auto cells = gaze::aggregate_metrics(trials, opt);
        const std::string stem = "aggregate_" + gaze::to_string(gr);
        m.output(stem + ".csv", formats::write_aggregate_csv(cells));
        m.output(stem + ".json", formats::dump(formats::to_json(cells)));
    }
    m.finish();
    return 0;
}

// report -------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> inputs;
    bool kw = false;
    bool anova = false;
    bool pearson = false;
    int outlier_pos = 0;
    std::string distant = "ring";
    std::string accuracy = "precision";
};

enum class InputKind { detection, metrics, responses };

InputKind classify(const std::string& text, const std::string& name) {
    const auto first_line = text.substr(0, text.find('\n'));
    if (first_line.rfind("participant_id,stimulus_id,product,", 0) == 0) return InputKind::metrics;
    if (first_line.rfind("participant_id,task,", 0) == 0) return InputKind::responses;
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') return InputKind::detection;
    throw InvalidArgument(name + ": not a detection JSON, metrics CSV or response CSV");
}

void add_test(Json& tests, std::string& txt, const std::string& label, const stats::TestResult& r) {
    Json t = formats::to_json(r);
    t["on"] = label;
    tests.push_back(t);
    txt += padr(r.method, 16) + padr(label, 28) + " stat " + pad(fixed(r.statistic, 4), 10) + "  df " +
           fixed(r.df1, 0) + (r.df2 > 0 ? "," + fixed(r.df2, 0) : "") + "  p " + fixed(r.p_value, 4) + "\n";
}

std::string cells_table(const std::string& title, const std::vector<gaze::AggregateCell>& cells) {
    std::string t = title + "\n";
    t += padr("group", 12) + pad("units", 6) + pad("fixated", 8) + pad("ttff_s", 9) + pad("fix_n", 7) +
         pad("time_s", 8) + pad("revisits", 9) + "\n";
    for (const auto& c : cells) {
        t += padr(c.group, 12) + pad(std::to_string(c.units), 6) + pad(std::to_string(c.fixated), 8) +
             pad(fixed(c.ttff.mean / 1000.0, 2), 9) + pad(fixed(c.fixation_count.mean, 2), 7) +
             pad(fixed(c.time_spent.mean / 1000.0, 2), 8) + pad(fixed(c.revisit_count.mean, 2), 9) + "\n";
    }
    return t;
}

int cmd_report(const Globals& g, const ReportArgs& a) {
    if (a.inputs.empty()) throw InvalidArgument("report needs at least one input");
    Manifest m("report", g);
    std::vector<std::pair<std::string, std::string>> texts;
    std::optional<InputKind> kind;
    for (const auto& path : a.inputs) {
        std::string text = m.input_text(path);
        const InputKind k = classify(text, path);
        if (kind && *kind != k) throw InvalidArgument(path + ": cannot mix report input kinds");
        kind = k;
        texts.emplace_back(path, std::move(text));
    }

    Json report{{"kind", ""}};
    Json tests = Json::array();
    std::string txt;

    if (*kind == InputKind::detection) {
        report["kind"] = "detection";
        std::map<std::tuple<std::string, std::string, int, int>, scoring::Detection> merged;
        for (const auto& [path, text] : texts) {
            const Json j = formats::parse_json(text, path);
            if (!j.is_object() || !j.contains("detections") || !j["detections"].is_array()) {
                throw InvalidArgument(path + ": missing detections array");
            }
            for (const auto& row : j["detections"]) {
                const auto d = formats::detection_from_json(row);
                auto& acc = merged[{d.model, d.feature, d.position, d.k}];
                if (acc.total == 0) acc = d;
                else {
                    acc.hits += d.hits;
                    acc.total += d.total;
                }
                acc.hit_rate = static_cast<double>(acc.hits) / acc.total;
            }
        }
        Json rows = Json::array();
        txt += "Outlier detection (hit@k)\n";
        txt += padr("model", 8) + padr("feature", 14) + pad("pos", 4) + pad("k", 3) + pad("hits", 6) + pad("rate", 7) + "\n";
        for (const auto& [key, d] : merged) {
            rows.push_back(formats::to_json(d));
            txt += padr(d.model, 8) + padr(d.feature, 14) + pad(std::to_string(d.position), 4) +
                   pad(std::to_string(d.k), 3) + pad(std::to_string(d.hits) + "/" + std::to_string(d.total), 6) +
                   pad(fixed(d.hit_rate, 2), 7) + "\n";
        }
        report["detections"] = rows;
    } else if (*kind == InputKind::metrics) {
        report["kind"] = "gaze-metrics";
        std::vector<gaze::Trial> trials;
        for (const auto& [path, text] : texts) {
            for (auto& t : formats::read_metrics_csv(text)) trials.push_back(std::move(t));
        }
        const auto distant = gaze::parse_distant_rule(a.distant);
        std::vector<gaze::AggregateOptions> groupings{{gaze::Grouping::kind, std::nullopt, distant}};
        if (a.outlier_pos) groupings.push_back({gaze::Grouping::neighborhood, a.outlier_pos, distant});
        report["trials"] = trials.size();
        Json aggregates = Json::object();
        for (const auto& opt : groupings) {
            const auto cells = gaze::aggregate_metrics(trials, opt);
            aggregates[gaze::to_string(opt.grouping)] = formats::to_json(cells);
            txt += cells_table("Gaze metrics by " + gaze::to_string(opt.grouping) + " (means)", cells) + "\n";
            const auto groups = gaze::group_values(trials, opt, "ttff");
            if (a.kw) add_test(tests, txt, "ttff by " + gaze::to_string(opt.grouping), stats::kruskal_wallis(groups));
            if (a.anova) add_test(tests, txt, "ttff by " + gaze::to_string(opt.grouping), stats::one_way_anova(groups));
        }
        if (a.pearson) {
            stats::Samples fx, spent;
            for (const auto& t : trials) {
                for (const auto& mt : t.metrics) {
                    fx.push_back(mt.fixation_count);
                    spent.push_back(static_cast<double>(mt.time_spent));
                }
            }
            add_test(tests, txt, "fixation_count~time_spent", stats::pearson_test(fx, spent));
        }
        report["aggregates"] = aggregates;
    } else {
        report["kind"] = "search-responses";
        std::vector<stats::SearchResponse> responses;
        for (const auto& [path, text] : texts) {
            for (auto& r : formats::read_responses_csv(text)) responses.push_back(std::move(r));
        }
        const auto summary = stats::search_summary(responses, stats::parse_accuracy_rule(a.accuracy));
        report["accuracy_rule"] = a.accuracy;
        report["summary"] = formats::to_json(summary);
        txt += "Reaction time (s) and accuracy\n";
        txt += padr("type", 8) + padr("feature", 9) + pad("n", 5) + pad("out1 avg", 10) + pad("med", 7) +
               pad("out2 avg", 10) + pad("med", 7) + pad("acc", 6) + pad("recall", 8) + "\n";
        for (const auto& c : summary.cells) {
            txt += padr(stimulus::to_string(c.variant), 8) + padr(stats::to_string(c.feature), 9) +
                   pad(std::to_string(c.trials), 5) + pad(fixed(c.rt_out1.mean / 1000.0, 2), 10) +
                   pad(fixed(c.rt_out1.median / 1000.0, 2), 7) + pad(fixed(c.rt_out2.mean / 1000.0, 2), 10) +
                   pad(fixed(c.rt_out2.median / 1000.0, 2), 7) + pad(fixed(c.accuracy, 2), 6) +
                   pad(fixed(c.recall, 2), 8) + "\n";
        }
        if (!summary.increases.empty()) {
            txt += "\nRelative out.1 RT increase, typeII vs typeI\n";
            for (const auto& r : summary.increases) {
                txt += padr(stats::to_string(r.feature), 9) + pad(fixed(r.percent, 2) + "%", 10) + "\n";
            }
        }
        txt += "\n";
        for (auto variant : {stimulus::Magnitude::type_i, stimulus::Magnitude::type_ii}) {
            const auto groups = stats::first_rt_by_feature(responses, variant);
            if (groups.size() < 2) continue;
            const std::string label = "out.1 rt by feature, " + stimulus::to_string(variant);
            if (a.anova) add_test(tests, txt, label, stats::one_way_anova(groups));
            if (a.kw) add_test(tests, txt, label, stats::kruskal_wallis(groups));
        }
        if (a.pearson) throw InvalidArgument("--pearson applies to gaze metrics inputs only");
    }
    report["tests"] = tests;
    m.output("report.json", formats::dump(report));
    m.output("report.txt", txt);
    m.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic product-list stimuli, saliency models and gaze analysis"};
    app.set_version_flag("--version", LISTSAL_VERSION);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Seed recorded in manifests and used by generate");
    app.add_option("--config", g.config_path, "JSON run configuration (itti, gbvs, gaze, k)");
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a StimulusSpec for a catalogue query");
    generate->add_option("--query", gen.query, "phones, monitors, chairs, backpacks or shoes")->capture_default_str();
    generate->add_option("--feature", gen.feature, "Outlier feature: price, discount_tag, image, star_rating");
    generate->add_option("--position", gen.position, "Outlier position (1-15)");
    generate->add_option("--magnitude", gen.magnitude, "typeI or typeII")->capture_default_str();
    generate->add_option("--name", gen.name, "Output file name")->capture_default_str();

    std::string spec_path;
    auto* render = app.add_subcommand("render", "Render a StimulusSpec to PNG plus AOI layout");
    render->add_option("--spec", spec_path, "StimulusSpec JSON")->required();

    SaliencyArgs sal;
    auto* saliency = app.add_subcommand("saliency", "Compute a saliency map and overlay");
    saliency->add_option("--image", sal.image, "Input PNG")->required();
    saliency->add_option("--model", sal.model, "itti or gbvs")->required();
    saliency->add_option("--params", sal.params, "Model parameter JSON");

    ScoreArgs sc;
    auto* score = app.add_subcommand("score", "Score AOIs and report outlier hit@k");
    score->add_option("--model", sc.model, "Model label for the maps")->required();
    score->add_option("--spec", sc.specs, "StimulusSpec JSON (repeatable)");
    score->add_option("--aoi", sc.aois, "AOI layout JSON (repeatable)");
    score->add_option("--map", sc.maps, "Binary saliency map (repeatable)");
    score->add_option("--k", sc.k, "Top-k cutoff (default 3)");

    GazeArgs ga;
    auto* analyze = app.add_subcommand("analyze-gaze", "Fixations and AOI metrics from gaze samples");
    analyze->add_option("--gaze", ga.gaze, "Gaze CSV")->required();
    analyze->add_option("--aoi", ga.aoi, "AOI layout JSON")->required();
    analyze->add_option("--grouping", ga.groupings, "kind, position or neighborhood (repeatable)");
    analyze->add_option("--outlier-pos", ga.outlier_pos, "Outlier position for neighborhood grouping");
    analyze->add_option("--distant", ga.distant, "ring (+-2) or rest")->capture_default_str();
    analyze->add_option("--dispersion", ga.dispersion, "I-DT dispersion threshold, px");
    analyze->add_option("--min-duration", ga.min_duration, "Minimum fixation duration, ms");

    ReportArgs rep;
    auto* report = app.add_subcommand("report", "Merge detection or metrics outputs into tables");
    report->add_option("inputs", rep.inputs, "detection JSON, metrics CSV or response CSV files")->required();
    report->add_flag("--kw", rep.kw, "Kruskal-Wallis test");
    report->add_flag("--anova", rep.anova, "One-way ANOVA");
    report->add_flag("--pearson", rep.pearson, "Pearson correlation of fixation count and time spent");
    report->add_option("--outlier-pos", rep.outlier_pos, "Add the near/distant grouping around this position");
    report->add_option("--distant", rep.distant, "ring (+-2) or rest")->capture_default_str();
    report->add_option("--accuracy", rep.accuracy, "precision or all-found")->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) return cmd_generate(g, gen);
        if (*render) return cmd_render(g, spec_path);
        if (*saliency) return cmd_saliency(g, sal);
        if (*score) return cmd_score(g, sc);
        if (*analyze) return cmd_analyze_gaze(g, ga);
        if (*report) return cmd_report(g, rep);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
