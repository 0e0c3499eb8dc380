#include "blinkforge/io.hpp"

#include "blinkforge/eda_features.hpp"
#include "blinkforge/eog_features.hpp"
#include "blinkforge/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace blinkforge::io {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

const std::string* find_meta(const CsvDocument& doc, std::string_view key) {
  for (const auto& [k, v] : doc.metadata)
    if (k == key) return &v;
  return nullptr;
}

void expect_header(const CsvRow& row, const std::vector<std::string_view>& names) {
  bool ok = row.fields.size() == names.size();
  for (std::size_t i = 0; ok && i < names.size(); ++i) ok = row.fields[i] == names[i];
  if (!ok) {
    std::string want;
    for (auto n : names) want += (want.empty() ? "" : ",") + std::string(n);
    parse_fail(row.line, "expected header '" + want + "'");
  }
}

std::size_t parse_index(std::string_view text, std::size_t line, std::string_view column) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    parse_fail(line, "column " + std::string(column) + ": expected a non-negative integer");
  return v;
}

double cell(const CsvRow& row, std::size_t i, std::string_view column) {
  return parse_double(row.fields[i], "line " + std::to_string(row.line) + ", column " +
                                         std::string(column));
}

std::optional<bool> parse_label(std::string_view text, std::size_t line) {
  if (text.empty()) return std::nullopt;
  if (text == "blink") return true;
  if (text == "artifact") return false;
  parse_fail(line, "label must be 'blink' or 'artifact', got '" + std::string(text) + "'");
}

std::string label_text(const std::optional<bool>& l) {
  if (!l) return "";
  return *l ? "blink" : "artifact";
}

void write_metadata(std::ostringstream& out,
                    const std::vector<std::pair<std::string, std::string>>& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

json pair_json(const std::pair<double, double>& p) { return json::array({p.first, p.second}); }

std::pair<double, double> pair_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorKind::ConfigError, std::string("'") + key + "' must be a [low, high] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_from(const json& j, const char* key) {
  if (!j.is_number()) fail(ErrorKind::ConfigError, std::string("'") + key + "' must be a number");
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) fail(ErrorKind::InvalidInput, "cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& where) {
  text = trim(text);
  double v = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    fail(ErrorKind::ParseError, where + ": expected a finite number, got '" +
                                    std::string(text) + "'");
  return v;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::InvalidArgument, "write failed for '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::InvalidArgument, "cannot move output into '" + path + "': " + ec.message());
}

CsvDocument parse_csv(std::string_view text) {
  CsvDocument doc;
  std::size_t line = 1, pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    // Quoted fields may span lines; find the real record end.
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false, was_quoted = false;
    std::size_t i = pos;
    const std::size_t start_line = line;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
        }
        continue;
      }
      if (c == '"' && field.empty() && !was_quoted) {
        quoted = was_quoted = true;
      } else if (c == ',') {
        fields.push_back(was_quoted ? field : std::string(trim(field)));
        field.clear();
        was_quoted = false;
      } else if (c == '\n') {
        break;
      } else {
        field += c;
      }
    }
    if (quoted) parse_fail(start_line, "unterminated quoted field");
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    eol = i;
    const std::string_view raw = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line;

    if (raw.empty()) continue;
    if (raw.front() == '#') {
      if (header_seen) continue;
      std::string_view body = trim(raw.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos)
        doc.metadata.emplace_back(std::string(trim(body.substr(0, eq))),
                                  std::string(trim(body.substr(eq + 1))));
      continue;
    }
    header_seen = true;
    doc.rows.push_back({start_line, std::move(fields)});
  }
  return doc;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + '\n';
}

Recording parse_recording(std::string_view text, Channel default_channel) {
  const CsvDocument doc = parse_csv(text);
  Channel channel = default_channel;
  if (const auto* c = find_meta(doc, "channel")) {
    if (*c != "EOG" && *c != "EDA") fail(ErrorKind::ParseError, "channel must be EOG or EDA");
    channel = channel_from_string(*c);
  }
  std::optional<double> fs;
  if (const auto* r = find_meta(doc, "sample_rate_hz")) {
    fs = parse_double(*r, "sample_rate_hz metadata");
    if (!(*fs > 0.0)) fail(ErrorKind::ParseError, "sample_rate_hz must be positive");
  }
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "recording file has no header");

  const CsvRow& header = doc.rows.front();
  const bool has_time = header.fields.size() == 2;
  if (has_time) {
    expect_header(header, {"t_s", "value"});
  } else {
    expect_header(header, {"value"});
    if (!fs) parse_fail(header.line, "a value-only recording needs '# sample_rate_hz='");
  }

  std::vector<double> t, v;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != header.fields.size())
      parse_fail(row.line, "expected " + std::to_string(header.fields.size()) + " columns");
    if (has_time) {
      t.push_back(cell(row, 0, "t_s"));
      v.push_back(cell(row, 1, "value"));
    } else {
      v.push_back(cell(row, 0, "value"));
    }
  }
  if (v.size() < 2) fail(ErrorKind::ParseError, "recording needs at least 2 samples");

  if (has_time) {
    const double step = t[1] - t[0];
    if (!(step > 0.0)) parse_fail(doc.rows[2].line, "t_s must be strictly increasing");
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double d = t[i] - t[i - 1];
      if (!(d > 0.0)) parse_fail(doc.rows[i + 1].line, "t_s must be strictly increasing");
      if (std::fabs(d - step) > 1e-6)
        parse_fail(doc.rows[i + 1].line, "non-uniform sampling: step " + format_double(d) +
                                             " s differs from " + format_double(step) + " s");
    }
    if (fs) {
      if (std::fabs(1.0 / *fs - step) > 1e-6)
        parse_fail(doc.rows[2].line, "t_s step disagrees with sample_rate_hz metadata");
    } else {
      fs = static_cast<double>(t.size() - 1) / (t.back() - t.front());
    }
  }
  return Recording(*fs, std::move(v), channel);
}

std::string format_recording(const Recording& rec) {
  std::ostringstream out;
  out << "# channel=" << to_string(rec.channel()) << '\n';
  out << "# sample_rate_hz=" << format_double(rec.sample_rate_hz()) << '\n';
  out << "t_s,value\n";
  const double fs = rec.sample_rate_hz();
  const auto x = rec.samples();
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(static_cast<double>(i) / fs) << ',' << format_double(x[i]) << '\n';
  return out.str();
}

bool is_catalog_feature(std::string_view name) {
  for (auto n : eog::catalog())
    if (n == name) return true;
  for (auto n : eda::kFeatureNames)
    if (n == name) return true;
  return false;
}

FeatureFile parse_feature_file(std::string_view text, bool allow_unknown_features) {
  const CsvDocument doc = parse_csv(text);
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "feature file has no header");
  const CsvRow& header = doc.rows.front();
  if (header.fields.empty() || header.fields.front() != "id")
    parse_fail(header.line, "first column must be 'id'");
  const bool has_label = header.fields.size() > 1 && header.fields.back() == "label";
  const std::size_t last = header.fields.size() - (has_label ? 1 : 0);
  std::vector<std::string> names(header.fields.begin() + 1,
                                 header.fields.begin() + static_cast<std::ptrdiff_t>(last));
  for (const auto& n : names)
    if (!allow_unknown_features && !is_catalog_feature(n))
      parse_fail(header.line, "unknown feature column '" + n + "'");

  FeatureFile file;
  file.metadata = doc.metadata;
  file.table = FeatureTable(names);
  std::vector<double> vals(names.size());
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != header.fields.size())
      parse_fail(row.line, "expected " + std::to_string(header.fields.size()) + " columns");
    for (std::size_t f = 0; f < names.size(); ++f) {
      const auto& c = row.fields[f + 1];
      vals[f] = c.empty() ? std::numeric_limits<double>::quiet_NaN() : cell(row, f + 1, names[f]);
    }
    std::optional<bool> label;
    if (has_label) label = parse_label(row.fields.back(), row.line);
    file.table.add_row(row.fields.front(), vals, label);
  }
  return file;
}

std::string format_feature_file(const FeatureFile& file) {
  const FeatureTable& t = file.table;
  std::ostringstream out;
  write_metadata(out, file.metadata);
  bool has_label = false;
  for (const auto& l : t.labels()) has_label = has_label || l.has_value();
  std::vector<std::string> fields{"id"};
  fields.insert(fields.end(), t.feature_names().begin(), t.feature_names().end());
  if (has_label) fields.push_back("label");
  out << csv_line(fields);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    fields.assign(1, t.ids()[r]);
    for (std::size_t f = 0; f < t.features(); ++f) fields.push_back(format_double(t.value(r, f)));
    if (has_label) fields.push_back(label_text(t.labels()[r]));
    out << csv_line(fields);
  }
  return out.str();
}

std::string format_segments(const std::vector<SegmentRecord>& segs, double fs) {
  bool has_label = false;
  for (const auto& s : segs) has_label = has_label || s.label.has_value();
  std::ostringstream out;
  out << "peak_id,center_index,left_base_index,right_base_index,center_s,height,prominence,"
         "width_s,edge_truncated"
      << (has_label ? ",label" : "") << '\n';
  for (const auto& s : segs) {
    const auto& c = s.segment.candidate;
    out << s.peak_id << ',' << c.center_index << ',' << s.segment.left_base_index << ','
        << s.segment.right_base_index << ','
        << format_double(static_cast<double>(c.center_index) / fs) << ','
        << format_double(c.height) << ',' << format_double(c.prominence) << ','
        << format_double(c.width_s) << ',' << (s.segment.edge_truncated ? 1 : 0);
    if (has_label) out << ',' << label_text(s.label);
    out << '\n';
  }
  return out.str();
}

std::vector<SegmentRecord> parse_segments(std::string_view text) {
  const CsvDocument doc = parse_csv(text);
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "segments file has no header");
  std::vector<std::string_view> cols{"peak_id",  "center_index", "left_base_index",
                                     "right_base_index", "center_s", "height",
                                     "prominence", "width_s", "edge_truncated"};
  const bool has_label = doc.rows.front().fields.size() == cols.size() + 1;
  if (has_label) cols.push_back("label");
  expect_header(doc.rows.front(), cols);

  std::vector<SegmentRecord> out;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != cols.size())
      parse_fail(row.line, "expected " + std::to_string(cols.size()) + " columns");
    SegmentRecord s;
    s.peak_id = parse_index(row.fields[0], row.line, cols[0]);
    s.segment.candidate.center_index = parse_index(row.fields[1], row.line, cols[1]);
    s.segment.left_base_index = parse_index(row.fields[2], row.line, cols[2]);
    s.segment.right_base_index = parse_index(row.fields[3], row.line, cols[3]);
    s.segment.candidate.height = cell(row, 5, cols[5]);
    s.segment.candidate.prominence = cell(row, 6, cols[6]);
    s.segment.candidate.width_s = cell(row, 7, cols[7]);
    const auto& trunc = row.fields[8];
    if (trunc != "0" && trunc != "1") parse_fail(row.line, "edge_truncated must be 0 or 1");
    s.segment.edge_truncated = trunc == "1";
    if (has_label) s.label = parse_label(row.fields[9], row.line);
    const auto& seg = s.segment;
    if (!(seg.left_base_index <= seg.candidate.center_index &&
          seg.candidate.center_index <= seg.right_base_index))
      parse_fail(row.line, "center must lie between the base indices");
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_truth(const std::vector<GroundTruth>& truth) {
  std::ostringstream out;
  out << "kind,time_s,center_index,start_s,end_s,amplitude,width_s\n";
  for (const auto& g : truth)
    out << to_string(g.kind) << ',' << format_double(g.time_s) << ',' << g.center_index << ','
        << format_double(g.start_s) << ',' << format_double(g.end_s) << ','
        << format_double(g.amplitude) << ',' << format_double(g.width_s) << '\n';
  return out.str();
}

std::vector<GroundTruth> parse_truth(std::string_view text) {
  const CsvDocument doc = parse_csv(text);
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "truth file has no header");
  expect_header(doc.rows.front(),
                {"kind", "time_s", "center_index", "start_s", "end_s", "amplitude", "width_s"});
  std::vector<GroundTruth> out;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != 7) parse_fail(row.line, "expected 7 columns");
    GroundTruth g;
    try {
      g.kind = event_kind_from_string(row.fields[0]);
    } catch (const Error&) {
      parse_fail(row.line, "unknown event kind '" + row.fields[0] + "'");
    }
    g.time_s = cell(row, 1, "time_s");
    g.center_index = parse_index(row.fields[2], row.line, "center_index");
    g.start_s = cell(row, 3, "start_s");
    g.end_s = cell(row, 4, "end_s");
    g.amplitude = cell(row, 5, "amplitude");
    g.width_s = cell(row, 6, "width_s");
    out.push_back(g);
  }
  return out;
}

std::string format_cull_config(const CullConfig& cfg) {
  json j = json::object();
  for (const auto& b : cfg.bounds) j[b.feature] = json::array({b.lower, b.upper});
  return j.dump(2) + "\n";
}

CullConfig parse_cull_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("cull config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::ConfigError, "cull config must be a JSON object");
  CullConfig cfg;
  for (const auto& [name, value] : j.items()) {
    const auto b = pair_from(value, name.c_str());
    cfg.bounds.push_back({name, b.first, b.second});
  }
  cfg.validate();
  return cfg;
}

std::string format_eval_report(const EvalReport& r) {
  json j = json::object();
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  j["accuracy"] = r.accuracy;
  j["f1"] = r.f1;
  return j.dump(2) + "\n";
}

SynthSpec parse_synth_spec(std::string_view text, SynthSpec spec) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("synth spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::ConfigError, "synth spec must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "seed") {
      if (!v.is_number_unsigned()) fail(ErrorKind::ConfigError, "'seed' must be a non-negative integer");
      spec.seed = v.get<std::uint64_t>();
    } else if (key == "sample_rate_hz") {
      spec.sample_rate_hz = number_from(v, k);
    } else if (key == "duration_s") {
      spec.duration_s = number_from(v, k);
    } else if (key == "noise_sigma") {
      spec.noise_sigma = number_from(v, k);
    } else if (key == "baseline") {
      spec.baseline = number_from(v, k);
    } else if (key == "event_rate_hz") {
      spec.event_rate_hz = number_from(v, k);
    } else if (key == "min_gap_s") {
      spec.min_gap_s = number_from(v, k);
    } else if (key == "amplitude") {
      spec.amplitude = pair_from(v, k);
    } else if (key == "width_s") {
      spec.width_s = pair_from(v, k);
    } else if (key == "skew") {
      spec.skew = pair_from(v, k);
    } else if (key == "drift_amplitude") {
      spec.drift_amplitude = number_from(v, k);
    } else if (key == "drift_period_s") {
      spec.drift_period_s = number_from(v, k);
    } else if (key == "events") {
      if (!v.is_array()) fail(ErrorKind::ConfigError, "'events' must be an array");
      spec.events.clear();
      for (const auto& e : v) {
        if (!e.is_object()) fail(ErrorKind::ConfigError, "each event must be an object");
        SynthEvent ev;
        for (const auto& [ek, ev_v] : e.items()) {
          if (ek == "kind") {
            if (!ev_v.is_string()) fail(ErrorKind::ConfigError, "event 'kind' must be a string");
            try {
              ev.kind = event_kind_from_string(ev_v.get<std::string>());
            } catch (const Error& err) {
              fail(ErrorKind::ConfigError, err.what());
            }
          } else if (ek == "time_s") {
            ev.time_s = number_from(ev_v, "time_s");
          } else if (ek == "amplitude") {
            ev.amplitude = number_from(ev_v, "amplitude");
          } else if (ek == "width_s") {
            ev.width_s = number_from(ev_v, "width_s");
          } else if (ek == "skew") {
            ev.skew = number_from(ev_v, "skew");
          } else {
            fail(ErrorKind::ConfigError, "unknown event field '" + ek + "'");
          }
        }
        spec.events.push_back(ev);
      }
    } else {
      fail(ErrorKind::ConfigError, "unknown synth spec field '" + key + "'");
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  return spec;
}

std::string format_synth_spec(const SynthSpec& spec) {
  json j = json::object();
  j["seed"] = spec.seed;
  j["sample_rate_hz"] = spec.sample_rate_hz;
  j["duration_s"] = spec.duration_s;
  j["noise_sigma"] = spec.noise_sigma;
  j["baseline"] = spec.baseline;
  j["event_rate_hz"] = spec.event_rate_hz;
  j["min_gap_s"] = spec.min_gap_s;
  j["amplitude"] = pair_json(spec.amplitude);
  j["width_s"] = pair_json(spec.width_s);
  j["skew"] = pair_json(spec.skew);
  j["drift_amplitude"] = spec.drift_amplitude;
  j["drift_period_s"] = spec.drift_period_s;
  json events = json::array();
  for (const auto& e : spec.events)
    events.push_back({{"kind", std::string(to_string(e.kind))},
                      {"time_s", e.time_s},
                      {"amplitude", e.amplitude},
                      {"width_s", e.width_s},
                      {"skew", e.skew}});
  j["events"] = events;
  return j.dump(2) + "\n";
}

std::vector<SurveySession> parse_survey_responses(std::string_view text, StaiRoster roster) {
  const CsvDocument doc = parse_csv(text);
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "responses file has no header");
  expect_header(doc.rows.front(), {"participant_id", "stage", "item", "value"});

  std::vector<SurveySession> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != 4) parse_fail(row.line, "expected 4 columns");
    const auto& pid = row.fields[0];
    const auto& stage = row.fields[1];
    const auto& item = row.fields[2];
    const std::string at = "line " + std::to_string(row.line) + ": ";
    if (stage != "Baseline" && stage != "CPT" && stage != "Recovery")
      fail(ErrorKind::InvalidResponse, at + "stage must be Baseline, CPT or Recovery");
    int value = 0;
    const auto& vt = row.fields[3];
    auto [ptr, ec] = std::from_chars(vt.data(), vt.data() + vt.size(), value);
    if (ec != std::errc() || ptr != vt.data() + vt.size() || vt.empty())
      fail(ErrorKind::InvalidResponse, at + "value must be an integer");

    auto [it, fresh] = index.try_emplace({pid, stage}, out.size());
    if (fresh) out.push_back({pid, stage, {}});
    SurveyResponse& resp = out[it->second].response;
    auto& bucket = is_panas_item(item) ? resp.panas
                   : is_stai_item(item, roster)
                       ? resp.stai
                       : (fail(ErrorKind::InvalidResponse,
                               at + "unknown survey item '" + item + "' for roster " +
                                   std::string(to_string(roster))),
                          resp.stai);
    if (!bucket.emplace(item, value).second)
      fail(ErrorKind::InvalidResponse, at + "duplicate item '" + item + "'");
  }
  return out;
}

std::string format_survey_scores(const std::vector<SurveyScore>& scores) {
  std::ostringstream out;
  out << "participant_id,stage,positive_affect,negative_affect,state_anxiety\n";
  for (const auto& s : scores)
    out << csv_field(s.participant_id) << ',' << s.stage << ',' << s.panas.positive_affect << ','
        << s.panas.negative_affect << ',' << s.state_anxiety << '\n';
  return out.str();
}

std::vector<SurveyScore> parse_survey_scores(std::string_view text) {
  const CsvDocument doc = parse_csv(text);
  if (doc.rows.empty()) fail(ErrorKind::ParseError, "scores file has no header");
  expect_header(doc.rows.front(), {"participant_id", "stage", "positive_affect",
                                   "negative_affect", "state_anxiety"});
  std::vector<SurveyScore> out;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != 5) parse_fail(row.line, "expected 5 columns");
    SurveyScore s;
    s.participant_id = row.fields[0];
    s.stage = row.fields[1];
    s.panas.positive_affect = static_cast<int>(parse_index(row.fields[2], row.line, "positive_affect"));
    s.panas.negative_affect = static_cast<int>(parse_index(row.fields[3], row.line, "negative_affect"));
    s.state_anxiety = static_cast<int>(parse_index(row.fields[4], row.line, "state_anxiety"));
    out.push_back(s);
  }
  return out;
}

}  // namespace blinkforge::io
