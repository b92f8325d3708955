#include "listsal/formats.hpp"
#include "listsal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace listsal::formats {

using stimulus::AoiKind;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw InvalidArgument((path.empty() ? "document" : path) + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InvalidArgument(join(path, key) + ": missing");
    return *it;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
            throw InvalidArgument(join(path, it.key()) + ": unknown field");
        }
    }
}

std::int64_t as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InvalidArgument(path + ": expected an integer");
    return j.get<std::int64_t>();
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw InvalidArgument(path + ": expected a number");
    return j.get<double>();
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw InvalidArgument(path + ": expected a string");
    return j.get<std::string>();
}

template <typename Parse>
auto parse_enum(const Json& j, const std::string& path, Parse parse) {
    try {
        return parse(as_string(j, path));
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

std::uint64_t as_seed(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size() && !s.empty()) return v;
    }
    throw InvalidArgument(path + ": expected an unsigned decimal integer");
}

Json color_json(Rgb8 c) { return Json::array({c.r, c.g, c.b}); }

Rgb8 color_from(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw InvalidArgument(path + ": expected [r, g, b]");
    std::uint8_t c[3];
    for (int i = 0; i < 3; ++i) {
        const std::int64_t v = as_int(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
        if (v < 0 || v > 255) throw InvalidArgument(path + ": channel values must lie in [0,255]");
        c[i] = static_cast<std::uint8_t>(v);
    }
    return {c[0], c[1], c[2]};
}

template <typename T, typename Get>
std::vector<T> list_from(const Json& j, const std::string& path, Get get) {
    if (!j.is_array()) throw InvalidArgument(path + ": expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

int as_int32(const Json& j, const std::string& path) {
    const std::int64_t v = as_int(j, path);
    if (v < INT32_MIN || v > INT32_MAX) throw InvalidArgument(path + ": out of range");
    return static_cast<int>(v);
}

Json number_or_null(const gaze::Summary& s, double v) { return s.n > 0 ? Json(v) : Json(nullptr); }

} // namespace

Json to_json(const stimulus::StimulusSpec& spec) {
    Json products = Json::array();
    for (const auto& p : spec.products) {
        Json tag = nullptr;
        if (p.discount_tag) tag = Json{{"style", stimulus::to_string(p.discount_tag->style)}, {"text", p.discount_tag->text}};
        products.push_back(Json{{"title", p.title},
                                {"description", p.description},
                                {"price", p.price_cents},
                                {"star_rating", p.star_rating},
                                {"review_count", p.review_count},
                                {"discount_tag", tag},
                                {"image_style",
                                 {{"base_color", color_json(p.image_style.base_color)},
                                  {"shape_motif", stimulus::to_string(p.image_style.shape_motif)},
                                  {"background_color", color_json(p.image_style.background_color)}}}});
    }
    Json outlier = nullptr;
    if (spec.outlier) {
        outlier = Json{{"feature", stimulus::to_string(spec.outlier->feature)},
                       {"position", spec.outlier->position},
                       {"magnitude", stimulus::to_string(spec.outlier->magnitude)}};
    }
    return Json{{"query", spec.query}, {"products", products}, {"outlier", outlier}, {"seed", spec.seed}};
}

stimulus::StimulusSpec stimulus_from_json(const Json& j) {
    stimulus::StimulusSpec spec;
    if (!j.is_object()) throw InvalidArgument("stimulus spec: expected an object");
    reject_unknown(j, {"query", "products", "outlier", "seed"}, "");
    spec.query = as_string(field(j, "query", ""), "query");
    spec.seed = j.contains("seed") ? as_seed(j["seed"], "seed") : 0;
    spec.products = list_from<stimulus::ProductSpec>(field(j, "products", ""), "products", [](const Json& pj,
                                                                                              const std::string& at) {
        if (!pj.is_object()) throw InvalidArgument(at + ": expected an object");
        reject_unknown(pj, {"title", "description", "price", "star_rating", "review_count", "discount_tag", "image_style"},
                       at);
        stimulus::ProductSpec p;
        p.title = as_string(field(pj, "title", at), at + ".title");
        p.description = as_string(field(pj, "description", at), at + ".description");
        p.price_cents = as_int(field(pj, "price", at), at + ".price");
        p.star_rating = as_number(field(pj, "star_rating", at), at + ".star_rating");
        p.review_count = as_int32(field(pj, "review_count", at), at + ".review_count");
        if (pj.contains("discount_tag") && !pj["discount_tag"].is_null()) {
            const Json& tj = pj["discount_tag"];
            const std::string tp = at + ".discount_tag";
            if (!tj.is_object()) throw InvalidArgument(tp + ": expected an object or null");
            reject_unknown(tj, {"style", "text"}, tp);
            p.discount_tag = stimulus::DiscountTag{
                parse_enum(field(tj, "style", tp), tp + ".style", stimulus::parse_magnitude),
                as_string(field(tj, "text", tp), tp + ".text")};
        }
        const std::string ip = at + ".image_style";
        const Json& ij = field(pj, "image_style", at);
        if (!ij.is_object()) throw InvalidArgument(ip + ": expected an object");
        reject_unknown(ij, {"base_color", "shape_motif", "background_color"}, ip);
        p.image_style.base_color = color_from(field(ij, "base_color", ip), ip + ".base_color");
        p.image_style.shape_motif = parse_enum(field(ij, "shape_motif", ip), ip + ".shape_motif", stimulus::parse_motif);
        if (ij.contains("background_color")) {
            p.image_style.background_color = color_from(ij["background_color"], ip + ".background_color");
        }
        return p;
    });
    if (j.contains("outlier") && !j["outlier"].is_null()) {
        const Json& oj = j["outlier"];
        if (!oj.is_object()) throw InvalidArgument("outlier: expected an object or null");
        reject_unknown(oj, {"feature", "position", "magnitude"}, "outlier");
        spec.outlier = stimulus::OutlierSpec{
            parse_enum(field(oj, "feature", "outlier"), "outlier.feature", stimulus::parse_feature),
            as_int32(field(oj, "position", "outlier"), "outlier.position"),
            parse_enum(field(oj, "magnitude", "outlier"), "outlier.magnitude", stimulus::parse_magnitude)};
    }
    spec.validate();
    return spec;
}

Json to_json(const stimulus::AoiLayout& layout) {
    Json aois = Json::array();
    for (const auto& a : layout.aois) {
        aois.push_back(Json{{"product", a.product},
                            {"kind", stimulus::to_string(a.kind)},
                            {"x", a.rect.x},
                            {"y", a.rect.y},
                            {"w", a.rect.w},
                            {"h", a.rect.h}});
    }
    return Json{{"page", {{"w", layout.page_width}, {"h", layout.page_height}}}, {"aois", aois}};
}

stimulus::AoiLayout layout_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("AOI layout: expected an object");
    reject_unknown(j, {"page", "aois"}, "");
    stimulus::AoiLayout layout;
    const Json& page = field(j, "page", "");
    layout.page_width = as_int32(field(page, "w", "page"), "page.w");
    layout.page_height = as_int32(field(page, "h", "page"), "page.h");
    layout.aois = list_from<stimulus::Aoi>(field(j, "aois", ""), "aois", [](const Json& aj, const std::string& at) {
        if (!aj.is_object()) throw InvalidArgument(at + ": expected an object");
        reject_unknown(aj, {"product", "kind", "x", "y", "w", "h"}, at);
        stimulus::Aoi a;
        a.product = as_int32(field(aj, "product", at), at + ".product");
        a.kind = parse_enum(field(aj, "kind", at), at + ".kind", stimulus::parse_aoi_kind);
        a.rect = {as_int32(field(aj, "x", at), at + ".x"), as_int32(field(aj, "y", at), at + ".y"),
                  as_int32(field(aj, "w", at), at + ".w"), as_int32(field(aj, "h", at), at + ".h")};
        return a;
    });
    layout.validate();
    return layout;
}

Json to_json(const itti::IttiParams& p) {
    return Json{{"pyramid_levels", p.pyramid_levels}, {"center_levels", p.center_levels},
                {"deltas", p.deltas},                 {"output_level", p.output_level},
                {"orientations", p.orientations},     {"max_side", p.max_side}};
}

Json to_json(const gbvs::GbvsParams& p) {
    return Json{{"grid_width", p.grid_width}, {"sigma_frac", p.sigma_frac},     {"epsilon", p.epsilon},
                {"tol", p.tol},               {"max_iters", p.max_iters},       {"max_side", p.max_side},
                {"orientations", p.orientations}};
}

Json to_json(const gaze::FixationParams& p) {
    return Json{{"dispersion", p.dispersion}, {"min_duration", p.min_duration}};
}

void update_from_json(itti::IttiParams& out, const Json& j) {
    itti::IttiParams p = out;
    if (!j.is_object()) throw InvalidArgument("itti: expected an object");
    reject_unknown(j, {"pyramid_levels", "center_levels", "deltas", "output_level", "orientations", "max_side"}, "itti");
    const auto ints = [](const Json& v, const std::string& at) { return as_int32(v, at); };
    const auto nums = [](const Json& v, const std::string& at) { return as_number(v, at); };
    if (j.contains("pyramid_levels")) p.pyramid_levels = as_int32(j["pyramid_levels"], "itti.pyramid_levels");
    if (j.contains("center_levels")) p.center_levels = list_from<int>(j["center_levels"], "itti.center_levels", ints);
    if (j.contains("deltas")) p.deltas = list_from<int>(j["deltas"], "itti.deltas", ints);
    if (j.contains("output_level")) p.output_level = as_int32(j["output_level"], "itti.output_level");
    if (j.contains("orientations")) p.orientations = list_from<double>(j["orientations"], "itti.orientations", nums);
    if (j.contains("max_side")) p.max_side = as_int32(j["max_side"], "itti.max_side");
    p.validate();
    out = p;
}

void update_from_json(gbvs::GbvsParams& out, const Json& j) {
    gbvs::GbvsParams p = out;
    if (!j.is_object()) throw InvalidArgument("gbvs: expected an object");
    reject_unknown(j, {"grid_width", "sigma_frac", "epsilon", "tol", "max_iters", "max_side", "orientations"}, "gbvs");
    const auto nums = [](const Json& v, const std::string& at) { return as_number(v, at); };
    if (j.contains("grid_width")) p.grid_width = as_int32(j["grid_width"], "gbvs.grid_width");
    if (j.contains("sigma_frac")) p.sigma_frac = as_number(j["sigma_frac"], "gbvs.sigma_frac");
    if (j.contains("epsilon")) p.epsilon = as_number(j["epsilon"], "gbvs.epsilon");
    if (j.contains("tol")) p.tol = as_number(j["tol"], "gbvs.tol");
    if (j.contains("max_iters")) p.max_iters = as_int32(j["max_iters"], "gbvs.max_iters");
    if (j.contains("max_side")) p.max_side = as_int32(j["max_side"], "gbvs.max_side");
    if (j.contains("orientations")) p.orientations = list_from<double>(j["orientations"], "gbvs.orientations", nums);
    p.validate();
    out = p;
}

void update_from_json(gaze::FixationParams& out, const Json& j) {
    gaze::FixationParams p = out;
    if (!j.is_object()) throw InvalidArgument("gaze: expected an object");
    reject_unknown(j, {"dispersion", "min_duration"}, "gaze");
    if (j.contains("dispersion")) p.dispersion = as_number(j["dispersion"], "gaze.dispersion");
    if (j.contains("min_duration")) p.min_duration = as_int(j["min_duration"], "gaze.min_duration");
    p.validate();
    out = p;
}

Json to_json(const gaze::Summary& s) {
    return Json{{"mean", number_or_null(s, s.mean)}, {"median", number_or_null(s, s.median)}, {"n", s.n}};
}

Json to_json(const std::vector<gaze::AggregateCell>& cells) {
    Json out = Json::array();
    for (const auto& c : cells) {
        out.push_back(Json{{"group", c.group},
                           {"units", c.units},
                           {"fixated", c.fixated},
                           {"ttff_ms", to_json(c.ttff)},
                           {"fixation_count", to_json(c.fixation_count)},
                           {"time_spent_ms", to_json(c.time_spent)},
                           {"revisit_count", to_json(c.revisit_count)}});
    }
    return out;
}

Json to_json(const std::vector<scoring::AoiSaliency>& scores) {
    Json out = Json::array();
    for (const auto& s : scores) {
        out.push_back(Json{{"product", s.key.product},
                           {"kind", stimulus::to_string(s.key.kind)},
                           {"mean", s.mean},
                           {"max", s.max},
                           {"mass_share", s.mass_share}});
    }
    return out;
}

Json to_json(const std::vector<scoring::RankedProduct>& ranking) {
    Json out = Json::array();
    for (const auto& r : ranking) out.push_back(Json{{"product", r.product}, {"mean", r.mean}, {"z", r.z}});
    return out;
}

Json to_json(const scoring::Detection& d) {
    return Json{{"model", d.model}, {"feature", d.feature}, {"position", d.position}, {"k", d.k},
                {"hits", d.hits},   {"total", d.total},     {"hit_rate", d.hit_rate}};
}

scoring::Detection detection_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("detection: expected an object");
    reject_unknown(j, {"model", "feature", "position", "k", "hits", "total", "hit_rate"}, "detection");
    scoring::Detection d;
    d.model = as_string(field(j, "model", "detection"), "detection.model");
    d.feature = as_string(field(j, "feature", "detection"), "detection.feature");
    d.position = as_int32(field(j, "position", "detection"), "detection.position");
    d.k = as_int32(field(j, "k", "detection"), "detection.k");
    d.hits = as_int32(field(j, "hits", "detection"), "detection.hits");
    d.total = as_int32(field(j, "total", "detection"), "detection.total");
    d.hit_rate = as_number(field(j, "hit_rate", "detection"), "detection.hit_rate");
    if (d.total < 1 || d.hits < 0 || d.hits > d.total) throw InvalidArgument("detection: inconsistent hits/total");
    return d;
}

Json to_json(const stats::TestResult& r) {
    Json j{{"method", r.method}, {"statistic", r.statistic}, {"df1", r.df1}};
    if (r.df2 > 0.0) j["df2"] = r.df2;
    j["p_value"] = r.p_value;
    return j;
}

Json to_json(const stats::SearchSummary& s) {
    Json cells = Json::array();
    for (const auto& c : s.cells) {
        cells.push_back(Json{{"variant", stimulus::to_string(c.variant)},
                             {"feature", stats::to_string(c.feature)},
                             {"trials", c.trials},
                             {"rt_out1_ms", to_json(c.rt_out1)},
                             {"rt_out2_ms", to_json(c.rt_out2)},
                             {"accuracy", c.accuracy},
                             {"recall", c.recall}});
    }
    Json inc = Json::array();
    for (const auto& r : s.increases) {
        inc.push_back(Json{{"feature", stats::to_string(r.feature)},
                           {"type_i_mean_ms", r.type_i_mean},
                           {"type_ii_mean_ms", r.type_ii_mean},
                           {"percent", r.percent}});
    }
    return Json{{"cells", cells}, {"relative_increase", inc}};
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(what + ": malformed JSON (" + e.what() + ")");
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// CSV --------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[400];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, p);
}

namespace {

struct CsvRows {
    std::vector<std::pair<int, std::vector<std::string>>> rows; // (line number, fields)
};

CsvRows read_csv(const std::string& text, const std::string& header, const std::string& what) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    CsvRows out;
    bool seen_header = false;
    const std::size_t width = split_csv_line(header).size();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!seen_header) {
            if (line != header) {
                throw InvalidArgument(what + " line 1: expected header '" + header + "'");
            }
            seen_header = true;
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != width) {
            throw InvalidArgument(what + " line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                                  " fields, found " + std::to_string(fields.size()));
        }
        out.rows.emplace_back(lineno, std::move(fields));
    }
    if (!seen_header) throw InvalidArgument(what + ": empty file (header '" + header + "' missing)");
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what, int lineno, const char* name) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
        throw InvalidArgument(what + " line " + std::to_string(lineno) + ": " + name + " '" + s +
                              "' is not an integer");
    }
    return v;
}

double parse_real(const std::string& s, const std::string& what, int lineno, const char* name) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        throw InvalidArgument(what + " line " + std::to_string(lineno) + ": " + name + " '" + s +
                              "' is not a number");
    }
    return v;
}

void require_nonempty(const std::string& s, const std::string& what, int lineno, const char* name) {
    if (s.empty()) throw InvalidArgument(what + " line " + std::to_string(lineno) + ": empty " + name);
}

template <typename F>
auto at_line(const std::string& what, int lineno, F f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(what + " line " + std::to_string(lineno) + ": " + e.what());
    }
}

const std::string kGazeHeader = "participant_id,stimulus_id,timestamp_ms,x,y";
const std::string kResponseHeader =
    "participant_id,task,variant,feature,outlier_positions,selected_position,rt_ms,correct";
const std::string kMetricsHeader =
    "participant_id,stimulus_id,product,kind,ttff_ms,fixation_count,time_spent_ms,revisit_count";

} // namespace

std::vector<gaze::GazeSample> read_gaze_csv(const std::string& text) {
    const std::string what = "gaze CSV";
    std::vector<gaze::GazeSample> out;
    for (const auto& [lineno, f] : read_csv(text, kGazeHeader, what).rows) {
        require_nonempty(f[0], what, lineno, "participant_id");
        require_nonempty(f[1], what, lineno, "stimulus_id");
        out.push_back({f[0], f[1], parse_int(f[2], what, lineno, "timestamp_ms"),
                       static_cast<double>(parse_int(f[3], what, lineno, "x")),
                       static_cast<double>(parse_int(f[4], what, lineno, "y"))});
    }
    return out;
}

std::string write_gaze_csv(const std::vector<gaze::GazeSample>& samples) {
    std::string out = kGazeHeader + "\n";
    for (const auto& s : samples) {
        out += s.participant + "," + s.stimulus + "," + std::to_string(s.t) + "," +
               std::to_string(std::llround(s.x)) + "," + std::to_string(std::llround(s.y)) + "\n";
    }
    return out;
}

std::vector<stats::SearchResponse> read_responses_csv(const std::string& text) {
    const std::string what = "response CSV";
    std::vector<stats::SearchResponse> out;
    std::string last_key;
    for (const auto& [lineno, f] : read_csv(text, kResponseHeader, what).rows) {
        const int ln = lineno;
        require_nonempty(f[0], what, ln, "participant_id");
        stats::SearchResponse r;
        r.participant = f[0];
        r.task = f[1];
        if (r.task != "I" && r.task != "II") {
            throw InvalidArgument(what + " line " + std::to_string(ln) + ": task '" + r.task + "' is not I or II");
        }
        r.variant = at_line(what, ln, [&] { return stimulus::parse_magnitude(f[2]); });
        r.feature = at_line(what, ln, [&] { return stats::parse_search_feature(f[3]); });
        std::string pos;
        std::istringstream ps(f[4]);
        while (std::getline(ps, pos, ';')) r.outlier_positions.push_back(static_cast<int>(
            parse_int(pos, what, ln, "outlier_positions")));
        const int selected = static_cast<int>(parse_int(f[5], what, ln, "selected_position"));
        const double rt = parse_real(f[6], what, ln, "rt_ms");
        bool correct = false;
        if (f[7] == "1" || f[7] == "true") {
            correct = true;
        } else if (f[7] != "0" && f[7] != "false") {
            throw InvalidArgument(what + " line " + std::to_string(ln) + ": correct must be 0/1");
        }
        const bool member =
            std::find(r.outlier_positions.begin(), r.outlier_positions.end(), selected) != r.outlier_positions.end();
        if (member != correct) {
            throw InvalidArgument(what + " line " + std::to_string(ln) +
                                  ": correct flag disagrees with outlier_positions");
        }
        const std::string key = f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[4];
        if (!out.empty() && key == last_key) {
            out.back().selections.push_back({selected, rt});
        } else {
            r.selections.push_back({selected, rt});
            out.push_back(std::move(r));
        }
        last_key = key;
        at_line(what, ln, [&] {
            out.back().validate();
            return 0;
        });
    }
    return out;
}

std::string write_responses_csv(const std::vector<stats::SearchResponse>& responses) {
    std::string out = kResponseHeader + "\n";
    for (const auto& r : responses) {
        std::string positions;
        for (std::size_t i = 0; i < r.outlier_positions.size(); ++i) {
            if (i) positions += ";";
            positions += std::to_string(r.outlier_positions[i]);
        }
        for (const auto& s : r.selections) {
            const bool correct = std::find(r.outlier_positions.begin(), r.outlier_positions.end(), s.position) !=
                                 r.outlier_positions.end();
            out += r.participant + "," + r.task + "," + stimulus::to_string(r.variant) + "," +
                   stats::to_string(r.feature) + "," + positions + "," + std::to_string(s.position) + "," +
                   format_number(s.rt_ms) + "," + (correct ? "1" : "0") + "\n";
        }
    }
    return out;
}

std::string write_metrics_csv(const std::vector<gaze::Trial>& trials) {
    std::string out = kMetricsHeader + "\n";
    for (const auto& t : trials) {
        for (const auto& m : t.metrics) {
            out += t.participant + "," + t.stimulus + "," + std::to_string(m.key.product) + "," +
                   stimulus::to_string(m.key.kind) + "," + (m.ttff ? std::to_string(*m.ttff) : "") + "," +
                   std::to_string(m.fixation_count) + "," + std::to_string(m.time_spent) + "," +
                   std::to_string(m.revisit_count) + "\n";
        }
    }
    return out;
}

std::vector<gaze::Trial> read_metrics_csv(const std::string& text) {
    const std::string what = "metrics CSV";
    std::vector<gaze::Trial> out;
    for (const auto& [lineno, f] : read_csv(text, kMetricsHeader, what).rows) {
        const int ln = lineno;
        require_nonempty(f[0], what, ln, "participant_id");
        require_nonempty(f[1], what, ln, "stimulus_id");
        gaze::AoiMetrics m;
        m.key.product = static_cast<int>(parse_int(f[2], what, ln, "product"));
        m.key.kind = at_line(what, ln, [&] { return stimulus::parse_aoi_kind(f[3]); });
        if (!f[4].empty()) m.ttff = parse_int(f[4], what, ln, "ttff_ms");
        m.fixation_count = static_cast<int>(parse_int(f[5], what, ln, "fixation_count"));
        m.time_spent = parse_int(f[6], what, ln, "time_spent_ms");
        m.revisit_count = static_cast<int>(parse_int(f[7], what, ln, "revisit_count"));
        if (m.ttff.has_value() != (m.fixation_count > 0)) {
            throw InvalidArgument(what + " line " + std::to_string(ln) + ": ttff must be present iff fixation_count > 0");
        }
        if (out.empty() || out.back().participant != f[0] || out.back().stimulus != f[1]) {
            out.push_back({f[0], f[1], {}});
        }
        out.back().metrics.push_back(m);
    }
    return out;
}

std::string write_aggregate_csv(const std::vector<gaze::AggregateCell>& cells) {
    std::string out =
        "group,units,fixated,ttff_mean_ms,ttff_median_ms,ttff_n,fixation_count_mean,fixation_count_median,"
        "time_spent_mean_ms,time_spent_median_ms,revisit_count_mean,revisit_count_median\n";
    for (const auto& c : cells) {
        out += c.group + "," + std::to_string(c.units) + "," + std::to_string(c.fixated) + "," +
               format_number(c.ttff.mean) + "," + format_number(c.ttff.median) + "," + std::to_string(c.ttff.n) +
               "," + format_number(c.fixation_count.mean) + "," + format_number(c.fixation_count.median) + "," +
               format_number(c.time_spent.mean) + "," + format_number(c.time_spent.median) + "," +
               format_number(c.revisit_count.mean) + "," + format_number(c.revisit_count.median) + "\n";
    }
    return out;
}

std::string write_search_summary_csv(const stats::SearchSummary& s) {
    std::string out = "variant,feature,trials,rt_out1_mean_ms,rt_out1_median_ms,rt_out2_mean_ms,rt_out2_median_ms,"
                      "accuracy,recall\n";
    for (const auto& c : s.cells) {
        out += stimulus::to_string(c.variant) + "," + stats::to_string(c.feature) + "," + std::to_string(c.trials) +
               "," + format_number(c.rt_out1.mean) + "," + format_number(c.rt_out1.median) + "," +
               format_number(c.rt_out2.mean) + "," + format_number(c.rt_out2.median) + "," +
               format_number(c.accuracy) + "," + format_number(c.recall) + "\n";
    }
    return out;
}

} // namespace listsal::formats
