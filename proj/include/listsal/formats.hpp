#pragma once

// JSON and CSV encodings of the library types. Readers throw InvalidArgument
// naming the offending field or line.

#include "listsal/gaze.hpp"
#include "listsal/gbvs.hpp"
#include "listsal/itti.hpp"
#include "listsal/scoring.hpp"
#include "listsal/stats.hpp"
#include "listsal/stimulus.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace listsal::formats {

using Json = nlohmann::ordered_json;

Json to_json(const stimulus::StimulusSpec& spec);
stimulus::StimulusSpec stimulus_from_json(const Json& j);

Json to_json(const stimulus::AoiLayout& layout);
stimulus::AoiLayout layout_from_json(const Json& j);

Json to_json(const itti::IttiParams& p);
Json to_json(const gbvs::GbvsParams& p);
Json to_json(const gaze::FixationParams& p);
/// Keys absent from `j` keep the value already in `p`; unknown keys are errors.
void update_from_json(itti::IttiParams& p, const Json& j);
void update_from_json(gbvs::GbvsParams& p, const Json& j);
void update_from_json(gaze::FixationParams& p, const Json& j);

Json to_json(const gaze::Summary& s);
Json to_json(const std::vector<gaze::AggregateCell>& cells);
Json to_json(const std::vector<scoring::AoiSaliency>& scores);
Json to_json(const std::vector<scoring::RankedProduct>& ranking);
Json to_json(const scoring::Detection& d);
scoring::Detection detection_from_json(const Json& j);
Json to_json(const stats::TestResult& r);
Json to_json(const stats::SearchSummary& s);

/// Parses JSON text; syntax errors become InvalidArgument naming `what`.
Json parse_json(const std::string& text, const std::string& what);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

// CSV --------------------------------------------------------------------

/// participant_id,stimulus_id,timestamp_ms,x,y with integer fields.
std::vector<gaze::GazeSample> read_gaze_csv(const std::string& text);
std::string write_gaze_csv(const std::vector<gaze::GazeSample>& samples);

/// participant_id,task,variant,feature,outlier_positions,selected_position,rt_ms,correct
/// One row per selection; consecutive rows with the same participant, task,
/// variant, feature and outlier set form one response.
std::vector<stats::SearchResponse> read_responses_csv(const std::string& text);
std::string write_responses_csv(const std::vector<stats::SearchResponse>& responses);

/// participant_id,stimulus_id,product,kind,ttff_ms,fixation_count,time_spent_ms,revisit_count
/// (ttff_ms empty when the AOI was never fixated).
std::string write_metrics_csv(const std::vector<gaze::Trial>& trials);
std::vector<gaze::Trial> read_metrics_csv(const std::string& text);

std::string write_aggregate_csv(const std::vector<gaze::AggregateCell>& cells);
std::string write_search_summary_csv(const stats::SearchSummary& s);

/// Splits a line on commas; no quoting is supported by any of the formats.
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest fixed-notation text that reads back as the same double.
std::string format_number(double v);

} // namespace listsal::formats
