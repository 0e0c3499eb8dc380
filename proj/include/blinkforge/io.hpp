#pragma once

#include "blinkforge/cull.hpp"
#include "blinkforge/peaks.hpp"
#include "blinkforge/recording.hpp"
#include "blinkforge/surveys.hpp"
#include "blinkforge/synth.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blinkforge::io {

// Shortest decimal that round-trips; NaN becomes an empty string.
std::string format_double(double v);
// Strict parse of a finite decimal; throws ParseError mentioning `where`.
double parse_double(std::string_view text, const std::string& where);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

// Minimal CSV: comma separated, double-quoted fields with "" escapes.
struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source text
  std::vector<std::string> fields;
};
struct CsvDocument {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key=value" lines
  std::vector<CsvRow> rows;  // header first
};
CsvDocument parse_csv(std::string_view text);
std::string csv_field(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

// RecordingFile:
//   # channel=EOG
//   # sample_rate_hz=100
//   t_s,value
// A "value"-only header needs the sample_rate_hz line. Time columns must be
// uniform within 1e-6 s.
Recording parse_recording(std::string_view text, Channel default_channel = Channel::EOG);
std::string format_recording(const Recording& rec);

// FeatureFile: id, one column per catalog feature, optional label column
// (blink | artifact). Empty cells are absent values (NaN).
struct FeatureFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  FeatureTable table;
};
FeatureFile parse_feature_file(std::string_view text, bool allow_unknown_features = false);
std::string format_feature_file(const FeatureFile& file);
bool is_catalog_feature(std::string_view name);

struct SegmentRecord {
  std::size_t peak_id = 0;
  PeakSegment segment;  // slice left empty on parse
  std::optional<bool> label;
};
std::string format_segments(const std::vector<SegmentRecord>& segs, double sample_rate_hz);
std::vector<SegmentRecord> parse_segments(std::string_view text);

std::string format_truth(const std::vector<GroundTruth>& truth);
std::vector<GroundTruth> parse_truth(std::string_view text);

// {"feature": [lower, upper], ...} in insertion order.
std::string format_cull_config(const CullConfig& cfg);
CullConfig parse_cull_config(std::string_view text);
std::string format_eval_report(const EvalReport& r);

SynthSpec parse_synth_spec(std::string_view text, SynthSpec defaults);
std::string format_synth_spec(const SynthSpec& spec);

struct SurveySession {
  std::string participant_id;
  std::string stage;  // Baseline | CPT | Recovery
  SurveyResponse response;
};
// participant_id, stage, item, value. Sessions keep first-appearance order.
std::vector<SurveySession> parse_survey_responses(std::string_view text, StaiRoster roster);

struct SurveyScore {
  std::string participant_id;
  std::string stage;
  PanasScore panas;
  int state_anxiety = 0;
};
std::string format_survey_scores(const std::vector<SurveyScore>& scores);
std::vector<SurveyScore> parse_survey_scores(std::string_view text);

}  // namespace blinkforge::io
