#pragma once

// Shared fixtures for the unit and acceptance tests.

#include "listsal/formats.hpp"
#include "listsal/gaze.hpp"
#include "listsal/image.hpp"
#include "listsal/io.hpp"
#include "listsal/stimulus.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

namespace fs = std::filesystem;

inline fs::path data_path(const std::string& rel) { return fs::path(LISTSAL_DATA_DIR) / rel; }
inline fs::path golden_path(const std::string& rel) { return fs::path(LISTSAL_GOLDEN_DIR) / rel; }

/// Fresh, empty directory under the build tree.
inline fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(LISTSAL_SCRATCH_DIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline listsal::RasterImage load_card(const std::string& name) {
    return listsal::RasterImage::from_rgb8(listsal::io::read_png(data_path("cards/" + name)));
}

inline listsal::stimulus::StimulusSpec load_spec(const std::string& name) {
    const auto text = listsal::io::read_text(data_path("corpus/" + name));
    return listsal::formats::stimulus_from_json(listsal::formats::parse_json(text, name));
}

inline std::vector<std::string> corpus_names() {
    std::vector<std::string> names;
    for (const char* q : {"phones", "chairs", "monitors"}) {
        for (int p : {3, 8, 13}) names.push_back(std::string(q) + "_p" + std::to_string(p) + ".json");
    }
    return names;
}

inline listsal::RasterImage random_image(std::mt19937_64& rng, int w, int h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> r(static_cast<std::size_t>(w) * h), g(r.size()), b(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = u(rng);
        g[i] = u(rng);
        b[i] = u(rng);
    }
    return {w, h, std::move(r), std::move(g), std::move(b)};
}

struct CliResult {
    int code = -1;
    std::string output; // stdout and stderr
};

/// Runs the CLI binary with a shell-quoted argument list.
inline CliResult run_cli(const std::vector<std::string>& args) {
    std::string cmd = "'" + std::string(LISTSAL_CLI) + "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " 2>&1";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string read(const fs::path& p) { return listsal::io::read_text(p); }

inline listsal::stimulus::AoiLayout cohort_layout() {
    return listsal::formats::layout_from_json(
        listsal::formats::parse_json(read(data_path("fixtures/cohort_aoi.json")), "cohort_aoi.json"));
}

/// Library pipeline over the bundled gaze cohort with default fixation parameters.
inline std::vector<listsal::gaze::Trial> cohort_trials() {
    using namespace listsal;
    const auto layout = cohort_layout();
    std::vector<gaze::Trial> trials;
    for (const auto& [key, trace] : gaze::split_traces(formats::read_gaze_csv(read(data_path("fixtures/cohort_gaze.csv"))))) {
        trials.push_back({key.first, key.second, gaze::compute_aoi_metrics(gaze::detect_fixations(trace), layout)});
    }
    return trials;
}

} // namespace testing
