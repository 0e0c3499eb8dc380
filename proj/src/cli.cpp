#include "blinkforge/cli.hpp"

#include "blinkforge/cull.hpp"
#include "blinkforge/eda_features.hpp"
#include "blinkforge/eog_features.hpp"
#include "blinkforge/io.hpp"
#include "blinkforge/parallel.hpp"
#include "blinkforge/peaks.hpp"
#include "blinkforge/shapley.hpp"
#include "blinkforge/signal.hpp"
#include "blinkforge/surveys.hpp"
#include "blinkforge/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace blinkforge::cli {
namespace {

using json = nlohmann::ordered_json;

struct FileHash {
  std::string path;
  std::string hash;
};

struct Run {
  std::ostream& out;
  std::ostream& err;
  std::string command;
  std::vector<std::string> argv;
  std::string config_path;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  json params = json::object();
  std::vector<FileHash> inputs;
  std::vector<FileHash> outputs;

  std::string read(const std::string& path) {
    std::string text = io::read_file(path);
    inputs.push_back({path, io::hex64(io::fnv1a64(text))});
    return text;
  }

  void write(const std::string& path, const std::string& content) {
    io::write_file_atomic(path, content);
    outputs.push_back({path, io::hex64(io::fnv1a64(content))});
  }

  void manifest(const std::string& primary) {
    json m = json::object();
    m["tool"] = "blinkforge";
    m["version"] = std::string(kVersion);
    m["command"] = command;
    m["argv"] = argv;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["parameters"] = params;
    if (!config_path.empty()) m["config"] = {{"path", config_path}, {"fnv1a64", config_hash}};
    json in = json::array(), outs = json::array();
    for (const auto& f : inputs) in.push_back({{"path", f.path}, {"fnv1a64", f.hash}});
    for (const auto& f : outputs) outs.push_back({{"path", f.path}, {"fnv1a64", f.hash}});
    m["inputs"] = in;
    m["outputs"] = outs;
    io::write_file_atomic(primary + ".manifest.json", m.dump(2) + "\n");
  }
};

struct Leaf {
  CLI::App* app;
  std::string name;
  std::function<void(Run&)> action;
};

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  c.seed_opt = sub->add_option("--seed", c.seed, "Seed for stochastic steps; recorded in the manifest");
  sub->add_option("--config", c.config,
                  "JSON object of flag values ({\"bins\": 15, ...}); explicit flags override it");
}

std::vector<std::string> split_list(const std::string& text, const char* what) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) fail(ErrorKind::InvalidArgument, std::string("empty entry in ") + what);
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) fail(ErrorKind::InvalidArgument, std::string(what) + " must not be empty");
  return out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string fmt(double v) { return io::format_double(v); }

std::string report_line(const EvalReport& r) {
  return "accuracy=" + fmt(r.accuracy) + " f1=" + fmt(r.f1) + " tp=" + std::to_string(r.tp) +
         " fp=" + std::to_string(r.fp) + " tn=" + std::to_string(r.tn) +
         " fn=" + std::to_string(r.fn);
}

Recording load_recording(Run& run, const std::string& path, Channel fallback) {
  return io::parse_recording(run.read(path), fallback);
}

io::FeatureFile load_features(Run& run, const std::string& path, bool allow_unknown) {
  return io::parse_feature_file(run.read(path), allow_unknown);
}

// EOG filter chain flags shared by filter, detect, features eog, plotdata peaks.
struct EogFilterFlags {
  EogFilterParams p;
  bool no_sg = false;
  bool single_pass = false;

  void add(CLI::App* sub) {
    sub->add_option("--order", p.order, "Butterworth order");
    sub->add_option("--cutoff-hz", p.cutoff_hz, "Butterworth cutoff (Hz)");
    sub->add_option("--sg-window-s", p.sg_window_s, "Savitzky-Golay window (s)");
    sub->add_option("--sg-polyorder", p.sg_polyorder, "Savitzky-Golay polynomial order");
    sub->add_flag("--no-sg", no_sg, "Skip Savitzky-Golay smoothing");
    sub->add_flag("--single-pass", single_pass, "Causal single pass instead of zero-phase");
  }
  EogFilterParams get() const {
    EogFilterParams q = p;
    q.savitzky_golay = !no_sg;
    q.mode = single_pass ? FilterMode::SinglePass : FilterMode::ZeroPhase;
    return q;
  }
  json params() const {
    const auto q = get();
    return {{"order", q.order},
            {"cutoff_hz", q.cutoff_hz},
            {"savitzky_golay", q.savitzky_golay},
            {"sg_window_s", q.sg_window_s},
            {"sg_polyorder", q.sg_polyorder},
            {"mode", single_pass ? "single-pass" : "zero-phase"}};
  }
};

struct SearchFlags {
  SearchParams p;
  void add(CLI::App* sub) {
    sub->add_option("--prominence-min", p.prominence_min, "Minimum peak prominence (V)");
    sub->add_option("--width-min-s", p.width_min_s, "Minimum half-prominence width (s)");
    sub->add_option("--width-max-s", p.width_max_s, "Prefilter: maximum width (s)");
    sub->add_option("--height-min", p.height_min, "Prefilter: minimum height (V)");
    sub->add_option("--baseline-window-s", p.baseline_window_s, "Baseline search window (s)");
  }
  json params() const {
    return {{"prominence_min", p.prominence_min},
            {"width_min_s", p.width_min_s},
            {"width_max_s", p.width_max_s},
            {"height_min", p.height_min},
            {"baseline_window_s", p.baseline_window_s}};
  }
};

BfsStrategy strategy_from(const std::string& s) {
  if (s == "queue") return BfsStrategy::Queue;
  if (s == "bnb") return BfsStrategy::BranchAndBound;
  return BfsStrategy::Auto;
}

std::string_view strategy_name(BfsStrategy s) {
  switch (s) {
    case BfsStrategy::Queue: return "queue";
    case BfsStrategy::BranchAndBound: return "bnb";
    default: return "auto";
  }
}

// ---------------------------------------------------------------- filter

void add_filter(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* sub = app.add_subcommand("filter", "Apply the EOG or EDA preprocessing chain to a recording");
  struct Opts {
    Common c;
    std::string input, output, channel, component = "filtered";
    EogFilterFlags eog;
    int eda_order = 1;
    double eda_cutoff = 1.0, tonic_cutoff = EdaSplitParams{}.tonic_cutoff_hz;
    CLI::Option *order = nullptr, *cutoff = nullptr;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--input", o->input, "RecordingFile to filter")->required();
  sub->add_option("--output", o->output, "Filtered RecordingFile")->required();
  sub->add_option("--channel", o->channel, "Override the channel: EOG or EDA")
      ->check(CLI::IsMember({"EOG", "EDA"}));
  o->eog.add(sub);
  o->order = sub->get_option("--order");
  o->cutoff = sub->get_option("--cutoff-hz");
  o->order->description("Butterworth order (EOG default 5, EDA default 1)");
  o->cutoff->description("Butterworth cutoff in Hz (EOG default 10, EDA default 1)");
  sub->add_option("--component", o->component, "EDA output: filtered, tonic or phasic")
      ->check(CLI::IsMember({"filtered", "tonic", "phasic"}));
  sub->add_option("--tonic-cutoff-hz", o->tonic_cutoff, "EDA tonic low-pass cutoff (Hz)");
  leaves.push_back({sub, "filter", [o](Run& run) {
    Recording rec = load_recording(run, o->input, Channel::EOG);
    if (!o->channel.empty())
      rec = Recording(rec.sample_rate_hz(), rec.values(), channel_from_string(o->channel));
    json p = {{"channel", std::string(to_string(rec.channel()))}};
    Recording result = rec;
    if (rec.channel() == Channel::EOG) {
      const auto flags = o->eog.params();
      for (auto& [k, v] : flags.items()) p[k] = v;
      result = preprocess_eog(rec, o->eog.get());
    } else {
      EdaSplitParams sp;
      sp.filter.order = o->order->count() ? o->eog.p.order : o->eda_order;
      sp.filter.cutoff_hz = o->cutoff->count() ? o->eog.p.cutoff_hz : o->eda_cutoff;
      sp.filter.mode = o->eog.single_pass ? FilterMode::SinglePass : FilterMode::ZeroPhase;
      sp.tonic_cutoff_hz = o->tonic_cutoff;
      p["order"] = sp.filter.order;
      p["cutoff_hz"] = sp.filter.cutoff_hz;
      p["mode"] = o->eog.single_pass ? "single-pass" : "zero-phase";
      p["component"] = o->component;
      if (o->component == "filtered") {
        result = preprocess_eda(rec, sp.filter);
      } else {
        p["tonic_cutoff_hz"] = sp.tonic_cutoff_hz;
        auto split = tonic_phasic_split(rec, sp);
        result = o->component == "tonic" ? split.tonic : split.phasic;
      }
    }
    run.params = p;
    run.write(o->output, io::format_recording(result));
    run.manifest(o->output);
    run.out << "filtered " << result.size() << " samples -> " << o->output << '\n';
  }});
}

// ---------------------------------------------------------------- detect

std::vector<io::SegmentRecord> to_records(const std::vector<PeakSegment>& segs) {
  std::vector<io::SegmentRecord> out;
  for (std::size_t i = 0; i < segs.size(); ++i) out.push_back({i, segs[i], std::nullopt});
  return out;
}

void apply_truth(std::vector<io::SegmentRecord>& recs, const std::vector<GroundTruth>& truth,
                 double fs) {
  std::vector<PeakCandidate> cands;
  for (const auto& r : recs) cands.push_back(r.segment.candidate);
  const auto labels = label_candidates(cands, truth, fs);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].label = labels[i];
}

void add_detect(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* sub = app.add_subcommand(
      "detect", "Filter, detect peaks, apply the blink prefilter and segment each peak");
  struct Opts {
    Common c;
    std::string input, output, truth;
    bool prefiltered = false, no_prefilter = false;
    EogFilterFlags eog;
    SearchFlags search;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--input", o->input, "EOG RecordingFile")->required();
  sub->add_option("--output", o->output, "Segments CSV")->required();
  sub->add_option("--truth", o->truth, "Ground-truth CSV from synth; adds a label column");
  sub->add_flag("--prefiltered", o->prefiltered, "Input is already filtered; skip the filter chain");
  sub->add_flag("--no-prefilter", o->no_prefilter, "Keep peaks failing the width/height prefilter");
  o->eog.add(sub);
  o->search.add(sub);
  leaves.push_back({sub, "detect", [o](Run& run) {
    const Recording rec = load_recording(run, o->input, Channel::EOG);
    const Recording filtered = o->prefiltered ? rec : preprocess_eog(rec, o->eog.get());
    json p = {{"prefiltered", o->prefiltered}, {"blink_prefilter", !o->no_prefilter}};
    if (!o->prefiltered) p["filter"] = o->eog.params();
    p["search"] = o->search.params();
    run.params = p;
    auto recs = to_records(segment_all(filtered, o->search.p, !o->no_prefilter));
    if (!o->truth.empty())
      apply_truth(recs, io::parse_truth(run.read(o->truth)), rec.sample_rate_hz());
    run.write(o->output, io::format_segments(recs, rec.sample_rate_hz()));
    run.manifest(o->output);
    run.out << "segments: " << recs.size() << " -> " << o->output << '\n';
  }});
}

// ---------------------------------------------------------------- features

void add_features_eog(CLI::App* parent, std::vector<Leaf>& leaves) {
  auto* sub = parent->add_subcommand("eog", "Per-peak EOG feature catalog (FeatureFile)");
  struct Opts {
    Common c;
    std::string recording, segments, output, label, truth;
    bool normalize = false, prefiltered = false, exclude_truncated = false;
    EogFilterFlags eog;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--recording", o->recording, "EOG RecordingFile the segments came from")->required();
  sub->add_option("--segments", o->segments, "Segments CSV from detect")->required();
  sub->add_option("--output", o->output, "FeatureFile")->required();
  sub->add_flag("--normalize", o->normalize,
                "Min-max scale each segment first; drops Signal Height");
  sub->add_flag("--prefiltered", o->prefiltered, "Recording is already filtered");
  sub->add_flag("--exclude-truncated", o->exclude_truncated,
                "Skip segments whose baseline search hit the recording edge");
  sub->add_option("--label", o->label, "Label every row: blink or artifact")
      ->check(CLI::IsMember({"blink", "artifact"}));
  sub->add_option("--truth", o->truth, "Ground-truth CSV used to label rows");
  o->eog.add(sub);
  leaves.push_back({sub, "features eog", [o](Run& run) {
    const Recording rec = load_recording(run, o->recording, Channel::EOG);
    const Recording filtered = o->prefiltered ? rec : preprocess_eog(rec, o->eog.get());
    auto recs = io::parse_segments(run.read(o->segments));
    const double fs = rec.sample_rate_hz();
    if (!o->truth.empty()) apply_truth(recs, io::parse_truth(run.read(o->truth)), fs);
    if (!o->label.empty())
      for (auto& r : recs) r.label = o->label == "blink";

    json p = {{"normalize", o->normalize},
              {"prefiltered", o->prefiltered},
              {"exclude_truncated", o->exclude_truncated}};
    if (!o->prefiltered) p["filter"] = o->eog.params();
    if (!o->label.empty()) p["label"] = o->label;
    run.params = p;

    std::vector<std::optional<BlinkFeatures>> rows(recs.size());
    std::vector<std::string> skipped(recs.size());
    const auto x = filtered.samples();
    parallel_for(recs.size(), resolve_threads(), [&](std::size_t i) {
      PeakSegment seg = recs[i].segment;
      if (seg.right_base_index >= x.size())
        fail(ErrorKind::InvalidInput, "segment " + std::to_string(recs[i].peak_id) +
                                          " extends past the end of the recording");
      if (o->exclude_truncated && seg.edge_truncated) {
        skipped[i] = "edge truncated";
        return;
      }
      seg.slice.assign(x.begin() + static_cast<std::ptrdiff_t>(seg.left_base_index),
                       x.begin() + static_cast<std::ptrdiff_t>(seg.right_base_index) + 1);
      try {
        rows[i] = extract_eog_features(seg, fs, o->normalize);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InvalidSegment && e.kind() != ErrorKind::DegenerateShape)
          throw;
        skipped[i] = e.what();
      }
    });

    io::FeatureFile file;
    file.metadata = {{"kind", "eog"}, {"normalize", o->normalize ? "true" : "false"}};
    file.table = FeatureTable(eog::feature_names(o->normalize));
    std::size_t kept = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (!rows[i]) {
        run.err << "skipping peak " << recs[i].peak_id << ": " << skipped[i] << '\n';
        continue;
      }
      file.table.add_row(std::to_string(recs[i].peak_id), rows[i]->values, recs[i].label);
      ++kept;
    }
    run.write(o->output, io::format_feature_file(file));
    run.manifest(o->output);
    run.out << "rows: " << kept << " of " << recs.size() << " -> " << o->output << '\n';
  }});
}

void add_features_eda(CLI::App* parent, std::vector<Leaf>& leaves) {
  auto* sub = parent->add_subcommand("eda", "Windowed EDA features (FeatureFile)");
  struct Opts {
    Common c;
    std::string recording, output, source = "phasic";
    double window_s = 1.0;
    EdaSplitParams split;
    bool single_pass = false;
    EdaFeatureParams fp;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--recording", o->recording, "EDA RecordingFile")->required();
  sub->add_option("--output", o->output, "FeatureFile")->required();
  sub->add_option("--source", o->source, "Signal to window: phasic or filtered")
      ->check(CLI::IsMember({"phasic", "filtered"}));
  sub->add_option("--window-s", o->window_s, "Window length (s)");
  sub->add_option("--order", o->split.filter.order, "Butterworth order");
  sub->add_option("--cutoff-hz", o->split.filter.cutoff_hz, "Butterworth cutoff (Hz)");
  sub->add_flag("--single-pass", o->single_pass, "Causal single pass instead of zero-phase");
  sub->add_option("--tonic-cutoff-hz", o->split.tonic_cutoff_hz, "Tonic low-pass cutoff (Hz)");
  sub->add_option("--higuchi-kmax", o->fp.higuchi_kmax, "Higuchi kmax");
  sub->add_option("--permutation-order", o->fp.permutation_order, "Permutation entropy order");
  sub->add_option("--permutation-delay", o->fp.permutation_delay, "Permutation entropy delay");
  leaves.push_back({sub, "features eda", [o](Run& run) {
    const Recording rec = load_recording(run, o->recording, Channel::EDA);
    EdaSplitParams sp = o->split;
    sp.filter.mode = o->single_pass ? FilterMode::SinglePass : FilterMode::ZeroPhase;
    run.params = {{"source", o->source},
                  {"window_s", o->window_s},
                  {"order", sp.filter.order},
                  {"cutoff_hz", sp.filter.cutoff_hz},
                  {"mode", o->single_pass ? "single-pass" : "zero-phase"},
                  {"tonic_cutoff_hz", sp.tonic_cutoff_hz},
                  {"higuchi_kmax", o->fp.higuchi_kmax},
                  {"permutation_order", o->fp.permutation_order},
                  {"permutation_delay", o->fp.permutation_delay}};
    const auto split = tonic_phasic_split(rec, sp);
    const Recording& src = o->source == "phasic" ? split.phasic : split.filtered;
    const auto windows = window_series(src, o->window_s);
    std::vector<EdaFeatures> rows(windows.size());
    parallel_for(windows.size(), resolve_threads(), [&](std::size_t i) {
      rows[i] = extract_eda_features(windows[i], src.sample_rate_hz(), o->fp);
    });
    io::FeatureFile file;
    file.metadata = {{"kind", "eda"}, {"source", o->source}, {"window_s", fmt(o->window_s)}};
    file.table = FeatureTable({eda::kFeatureNames.begin(), eda::kFeatureNames.end()});
    std::size_t absent = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      file.table.add_row(std::to_string(windows[i].start_index), rows[i].values);
      absent += rows[i].hjorth_absent ? 1 : 0;
    }
    run.write(o->output, io::format_feature_file(file));
    run.manifest(o->output);
    run.out << "windows: " << rows.size() << " (hjorth absent in " << absent << ") -> "
            << o->output << '\n';
  }});
}

// ---------------------------------------------------------------- cull

void write_report(Run& run, const std::string& path, const EvalReport& r) {
  if (!path.empty()) run.write(path, io::format_eval_report(r));
}

void add_cull(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* cull = app.add_subcommand("cull", "Search or apply per-feature culling bounds");
  cull->require_subcommand(1);

  {
    auto* sub = cull->add_subcommand("individual", "Single-feature two-phase bound search");
    struct Opts {
      Common c;
      std::string input, feature, config_out, report_out;
      int bins = 50;
      bool allow_unknown = false;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--input", o->input, "Labeled FeatureFile")->required();
    sub->add_option("--feature", o->feature, "Feature name")->required();
    sub->add_option("--bins", o->bins, "Grid bins");
    sub->add_option("--output-config", o->config_out, "CullConfig JSON")->required();
    sub->add_option("--output-report", o->report_out, "EvalReport JSON");
    sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
    leaves.push_back({sub, "cull individual", [o](Run& run) {
      const auto file = load_features(run, o->input, o->allow_unknown);
      run.params = {{"feature", o->feature}, {"bins", o->bins}};
      const auto r = individual_search(file.table, o->feature, o->bins);
      CullConfig cfg;
      cfg.set(r.feature, r.lower, r.upper);
      run.write(o->config_out, io::format_cull_config(cfg));
      write_report(run, o->report_out, r.report);
      run.manifest(o->config_out);
      run.out << r.feature << ": [" << fmt(r.lower) << ", " << fmt(r.upper) << "] steps ("
              << r.lower_steps << ", " << r.upper_steps << ") " << report_line(r.report) << '\n';
    }});
  }
  {
    auto* sub = cull->add_subcommand("bfs", "Joint bound search over a feature set");
    struct Opts {
      Common c;
      std::string input, features, config_out, report_out, strategy = "auto";
      int bins = 15;
      bool allow_unknown = false;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--input", o->input, "Labeled FeatureFile")->required();
    sub->add_option("--features", o->features, "Comma-separated feature names")->required();
    sub->add_option("--bins", o->bins, "Grid bins per feature");
    sub->add_option("--strategy", o->strategy, "auto, queue or bnb (all give the same optimum)")
        ->check(CLI::IsMember({"auto", "queue", "bnb"}));
    sub->add_option("--output-config", o->config_out, "CullConfig JSON")->required();
    sub->add_option("--output-report", o->report_out, "EvalReport JSON");
    sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
    leaves.push_back({sub, "cull bfs", [o](Run& run) {
      const auto file = load_features(run, o->input, o->allow_unknown);
      const auto names = split_list(o->features, "--features");
      run.params = {{"features", names}, {"bins", o->bins}, {"strategy", o->strategy}};
      BfsOptions opt;
      opt.bins = o->bins;
      opt.strategy = strategy_from(o->strategy);
      const auto r = bfs_search(file.table, names, opt);
      run.write(o->config_out, io::format_cull_config(r.config));
      write_report(run, o->report_out, r.report);
      run.manifest(o->config_out);
      for (const auto& b : r.config.bounds)
        run.out << b.feature << ": [" << fmt(b.lower) << ", " << fmt(b.upper) << "]\n";
      run.out << report_line(r.report) << " nodes=" << r.nodes_evaluated
              << " strategy=" << strategy_name(r.strategy_used) << '\n';
    }});
  }
  {
    auto* sub = cull->add_subcommand("apply", "Classify rows with a CullConfig");
    struct Opts {
      Common c;
      std::string input, bounds, output, report_out;
      bool allow_unknown = false;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--input", o->input, "FeatureFile")->required();
    sub->add_option("--bounds", o->bounds, "CullConfig JSON")->required();
    sub->add_option("--output", o->output, "Predictions CSV (id, predicted, label)")->required();
    sub->add_option("--output-report", o->report_out, "EvalReport JSON (needs labels)");
    sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
    leaves.push_back({sub, "cull apply", [o](Run& run) {
      const auto file = load_features(run, o->input, o->allow_unknown);
      const auto cfg = io::parse_cull_config(run.read(o->bounds));
      run.params = json::object();
      const auto pred = apply_bounds(file.table, cfg);
      const auto& t = file.table;
      std::string csv = "id,predicted,label\n";
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto& l = t.labels()[r];
        csv += io::csv_line({t.ids()[r], pred[r] ? "blink" : "artifact",
                             l ? (*l ? "blink" : "artifact") : ""});
      }
      run.write(o->output, csv);
      std::size_t passed = static_cast<std::size_t>(std::count(pred.begin(), pred.end(), true));
      run.out << "passed " << passed << " of " << t.rows() << '\n';
      if (!o->report_out.empty()) {
        const auto rep = evaluate(pred, t.label_vector());
        write_report(run, o->report_out, rep);
        run.out << report_line(rep) << '\n';
      }
      run.manifest(o->output);
    }});
  }
}

// ---------------------------------------------------------------- sweep

void add_sweep(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* sub = app.add_subcommand("sweep", "Joint bound search over every k-subset of candidates");
  struct Opts {
    Common c;
    std::string input, candidates, output, strategy = "auto";
    std::size_t k = 5;
    int bins = 15;
    std::size_t top = 0;
    bool allow_unknown = false;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--input", o->input, "Labeled FeatureFile")->required();
  sub->add_option("--candidates", o->candidates,
                  "Comma-separated candidate features (default: every column)");
  sub->add_option("--k", o->k, "Subset size");
  sub->add_option("--bins", o->bins, "Grid bins per feature");
  sub->add_option("--strategy", o->strategy, "auto, queue or bnb")
      ->check(CLI::IsMember({"auto", "queue", "bnb"}));
  sub->add_option("--top", o->top, "Keep only the best N rows (0 keeps all)");
  sub->add_option("--output", o->output, "Rankings CSV")->required();
  sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
  leaves.push_back({sub, "sweep", [o](Run& run) {
    const auto file = load_features(run, o->input, o->allow_unknown);
    const auto names = o->candidates.empty() ? file.table.feature_names()
                                             : split_list(o->candidates, "--candidates");
    run.params = {{"candidates", names}, {"k", o->k}, {"bins", o->bins},
                  {"strategy", o->strategy}, {"top", o->top}};
    BfsOptions opt;
    opt.bins = o->bins;
    opt.strategy = strategy_from(o->strategy);
    const auto ranked = combination_sweep(file.table, o->k, names, opt);
    std::string csv = "rank,features,accuracy,f1,tp,fp,tn,fn,bounds\n";
    const std::size_t keep = o->top ? std::min(o->top, ranked.size()) : ranked.size();
    for (std::size_t i = 0; i < keep; ++i) {
      const auto& e = ranked[i];
      const auto& r = e.result.report;
      json b = json::object();
      for (const auto& fb : e.result.config.bounds) b[fb.feature] = json::array({fb.lower, fb.upper});
      csv += io::csv_line({std::to_string(i + 1), join(e.features, ";"), fmt(r.accuracy),
                           fmt(r.f1), std::to_string(r.tp), std::to_string(r.fp),
                           std::to_string(r.tn), std::to_string(r.fn), b.dump()});
    }
    run.write(o->output, csv);
    run.manifest(o->output);
    run.out << "subsets: " << ranked.size();
    if (!ranked.empty())
      run.out << "; best " << join(ranked.front().features, ";") << ' '
              << report_line(ranked.front().result.report);
    run.out << '\n';
  }});
}

// ---------------------------------------------------------------- shapley

void add_shapley(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* sub = app.add_subcommand(
      "shapley", "Exact Shapley attribution of a ridge model fitted on a FeatureFile");
  struct Opts {
    Common c;
    std::string input, features, target, output, mean_out, background = "mean";
    double lambda = 0.1;
    bool allow_unknown = false;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--input", o->input, "FeatureFile")->required();
  sub->add_option("--features", o->features, "Comma-separated model features (at most 20)")
      ->required();
  sub->add_option("--target-column", o->target,
                  "Column to regress on (default: label, blink = 1, artifact = 0)");
  sub->add_option("--lambda", o->lambda, "Ridge penalty");
  sub->add_option("--background", o->background,
                  "mean (column means) or all (average over every row)")
      ->check(CLI::IsMember({"mean", "all"}));
  sub->add_option("--output", o->output, "Phi table CSV")->required();
  sub->add_option("--output-mean", o->mean_out, "Mean |phi| per feature CSV");
  sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
  leaves.push_back({sub, "shapley", [o](Run& run) {
    const auto file = load_features(run, o->input, o->allow_unknown);
    const auto names = split_list(o->features, "--features");
    if (names.size() > kMaxShapleyFeatures)
      fail(ErrorKind::TooManyFeatures, "exact Shapley supports at most " +
                                           std::to_string(kMaxShapleyFeatures) + " features");
    const auto& t = file.table;
    std::vector<std::size_t> cols;
    for (const auto& n : names) {
      if (n == o->target) fail(ErrorKind::InvalidArgument, "target column '" + n + "' is also a feature");
      cols.push_back(t.require(n));
    }
    std::optional<std::size_t> target_col;
    if (!o->target.empty()) target_col = t.require(o->target);
    run.params = {{"features", names},
                  {"target", o->target.empty() ? std::string("label") : o->target},
                  {"lambda", o->lambda},
                  {"background", o->background}};

    std::vector<double> x, y;
    std::vector<std::size_t> used;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      double target = 0.0;
      if (target_col) {
        target = t.value(r, *target_col);
      } else {
        if (!t.labels()[r]) fail(ErrorKind::InvalidInput, "row '" + t.ids()[r] + "' has no label");
        target = *t.labels()[r] ? 1.0 : 0.0;
      }
      bool ok = std::isfinite(target);
      for (auto c : cols) ok = ok && std::isfinite(t.value(r, c));
      if (!ok) continue;
      for (auto c : cols) x.push_back(t.value(r, c));
      y.push_back(target);
      used.push_back(r);
    }
    if (used.size() < t.rows())
      run.err << "dropped " << t.rows() - used.size() << " rows with absent values\n";
    if (used.size() < 2) fail(ErrorKind::InvalidInput, "need at least 2 complete rows");
    const std::size_t n = cols.size();
    const LinearModel model = fit_ridge(x, n, y, o->lambda);
    const Predictor predict = [&model](std::span<const double> v) { return model.predict(v); };

    std::vector<std::vector<double>> backgrounds;
    if (o->background == "mean") {
      std::vector<double> mean(n, 0.0);
      for (std::size_t r = 0; r < used.size(); ++r)
        for (std::size_t f = 0; f < n; ++f) mean[f] += x[r * n + f];
      for (auto& m : mean) m /= static_cast<double>(used.size());
      backgrounds.push_back(mean);
    } else {
      for (std::size_t r = 0; r < used.size(); ++r)
        backgrounds.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(r * n),
                                 x.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
    }
    std::vector<ShapleyReport> reports(used.size());
    parallel_for(used.size(), resolve_threads(), [&](std::size_t r) {
      reports[r] = shapley_exact(predict, std::span<const double>(x).subspan(r * n, n),
                                 backgrounds, names);
    });

    std::string csv = "instance_id,feature,feature_value,phi\n";
    for (std::size_t r = 0; r < used.size(); ++r)
      for (std::size_t f = 0; f < n; ++f)
        csv += io::csv_line({t.ids()[used[r]], names[f], fmt(x[r * n + f]), fmt(reports[r].phi[f])});
    run.write(o->output, csv);

    const auto mean_abs = mean_abs_shap(reports);
    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < n; ++f) order[f] = f;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mean_abs[a] > mean_abs[b]; });
    if (!o->mean_out.empty()) {
      std::string m = "feature,mean_abs_phi\n";
      for (auto f : order) m += io::csv_line({names[f], fmt(mean_abs[f])});
      run.write(o->mean_out, m);
    }
    run.manifest(o->output);
    run.out << "instances: " << used.size() << " intercept=" << fmt(model.intercept) << '\n';
    for (auto f : order)
      run.out << "  " << names[f] << ": mean|phi|=" << fmt(mean_abs[f])
              << " weight=" << fmt(model.weights[f]) << '\n';
  }});
}

// ---------------------------------------------------------------- survey

void add_survey(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* survey = app.add_subcommand("survey", "PANAS and STAI-state scoring");
  survey->require_subcommand(1);
  auto* sub = survey->add_subcommand("score", "Score long-format survey responses");
  struct Opts {
    Common c;
    std::string input, output, roster = "standard";
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->c);
  sub->add_option("--input", o->input, "Responses CSV: participant_id,stage,item,value")->required();
  sub->add_option("--output", o->output, "Scores CSV")->required();
  sub->add_option("--roster", o->roster, "STAI roster: standard (20 items) or study (19 items)")
      ->check(CLI::IsMember({"standard", "study"}));
  leaves.push_back({sub, "survey score", [o](Run& run) {
    const StaiRoster roster = stai_roster_from_string(o->roster);
    if (const auto w = roster_warning(roster)) run.err << "warning: " << *w << '\n';
    run.params = {{"roster", o->roster}};
    const auto sessions = io::parse_survey_responses(run.read(o->input), roster);
    std::vector<io::SurveyScore> scores;
    for (const auto& s : sessions) {
      try {
        scores.push_back({s.participant_id, s.stage, score_panas(s.response),
                          score_stai_state(s.response, roster)});
      } catch (const Error& e) {
        fail(e.kind(), "participant " + s.participant_id + ", stage " + s.stage + ": " + e.what());
      }
    }
    run.write(o->output, io::format_survey_scores(scores));
    run.manifest(o->output);
    run.out << "scored " << scores.size() << " sessions -> " << o->output << '\n';
  }});
}

// ---------------------------------------------------------------- synth

void add_synth(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* synth = app.add_subcommand("synth", "Seeded synthetic recordings with ground truth");
  synth->require_subcommand(1);
  for (const std::string kind : {"blink", "wire", "eda"}) {
    auto* sub = synth->add_subcommand(
        kind, kind == "blink"  ? "Blink session (optionally mixed with wire bursts)"
              : kind == "wire" ? "Wire-artifact session"
                               : "EDA session with SCRs");
    struct Opts {
      Common c;
      std::string spec, output, truth_out;
      double duration = 0, rate = 0, noise = 0, wire_rate = 0, event_rate = 0;
      CLI::Option *duration_opt = nullptr, *rate_opt = nullptr, *noise_opt = nullptr,
                  *event_rate_opt = nullptr;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--spec", o->spec, "Synth spec JSON (fields default per generator)");
    sub->add_option("--output", o->output, "RecordingFile")->required();
    sub->add_option("--truth-output", o->truth_out, "Ground-truth CSV (default <output>.truth.csv)");
    o->duration_opt = sub->add_option("--duration-s", o->duration, "Session length (s)");
    o->rate_opt = sub->add_option("--sample-rate-hz", o->rate, "Sample rate (Hz)");
    o->noise_opt = sub->add_option("--noise-sigma", o->noise, "Gaussian noise sigma");
    o->event_rate_opt = sub->add_option("--event-rate-hz", o->event_rate, "Poisson event rate (Hz)");
    if (kind == "blink")
      sub->add_option("--wire-rate-hz", o->wire_rate,
                      "Also plant wire bursts at this rate (default wire ranges)");
    leaves.push_back({sub, "synth " + kind, [o, kind](Run& run) {
      SynthSpec spec = kind == "blink" ? default_blink_spec()
                       : kind == "wire" ? default_wire_spec()
                                        : default_eda_spec();
      if (!o->spec.empty()) spec = io::parse_synth_spec(run.read(o->spec), spec);
      if (o->c.seed_opt->count()) spec.seed = o->c.seed;
      if (o->duration_opt->count()) spec.duration_s = o->duration;
      if (o->rate_opt->count()) spec.sample_rate_hz = o->rate;
      if (o->noise_opt->count()) spec.noise_sigma = o->noise;
      if (o->event_rate_opt->count()) spec.event_rate_hz = o->event_rate;
      run.seed = spec.seed;
      run.params = {{"spec", json::parse(io::format_synth_spec(spec))}};
      SynthSession s = [&] {
        if (kind == "eda") return synth_eda_session(spec);
        if (kind == "wire") return synth_wire_session(spec);
        if (o->wire_rate > 0.0) {
          SynthSpec w = default_wire_spec();
          w.event_rate_hz = o->wire_rate;
          run.params["wire_spec"] = json::parse(io::format_synth_spec(w));
          return synth_mixed_session(spec, w);
        }
        return synth_blink_session(spec);
      }();
      for (const auto& w : s.warnings) run.err << "warning: " << w << '\n';
      const std::string truth = o->truth_out.empty() ? o->output + ".truth.csv" : o->truth_out;
      run.write(o->output, io::format_recording(s.recording));
      run.write(truth, io::format_truth(s.truth));
      run.manifest(o->output);
      run.out << "events: " << s.truth.size() << ", samples: " << s.recording.size() << " -> "
              << o->output << '\n';
    }});
  }
}

// ---------------------------------------------------------------- plotdata

void add_plotdata(CLI::App& app, std::vector<Leaf>& leaves) {
  auto* plot = app.add_subcommand("plotdata", "Tidy CSV for external plotting");
  plot->require_subcommand(1);
  {
    auto* sub = plot->add_subcommand("peaks", "Signal traces with peak centers and bases");
    struct Opts {
      Common c;
      std::string recording, segments, output;
      bool prefiltered = false;
      EogFilterFlags eog;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--recording", o->recording, "EOG RecordingFile")->required();
    sub->add_option("--segments", o->segments, "Segments CSV")->required();
    sub->add_option("--output", o->output, "CSV: series,peak_id,t_s,value")->required();
    sub->add_flag("--prefiltered", o->prefiltered, "Recording is already filtered");
    o->eog.add(sub);
    leaves.push_back({sub, "plotdata peaks", [o](Run& run) {
      const Recording rec = load_recording(run, o->recording, Channel::EOG);
      const Recording filtered = o->prefiltered ? rec : preprocess_eog(rec, o->eog.get());
      const auto recs = io::parse_segments(run.read(o->segments));
      run.params = {{"prefiltered", o->prefiltered}};
      if (!o->prefiltered) run.params["filter"] = o->eog.params();
      const double fs = rec.sample_rate_hz();
      std::ostringstream csv;
      csv << "series,peak_id,t_s,value\n";
      auto trace = [&](const char* name, const Recording& r) {
        const auto x = r.samples();
        for (std::size_t i = 0; i < x.size(); ++i)
          csv << name << ",," << fmt(static_cast<double>(i) / fs) << ',' << fmt(x[i]) << '\n';
      };
      if (!o->prefiltered) trace("raw", rec);
      trace("filtered", filtered);
      const auto x = filtered.samples();
      for (const auto& r : recs) {
        const auto& s = r.segment;
        if (s.right_base_index >= x.size())
          fail(ErrorKind::InvalidInput, "segment " + std::to_string(r.peak_id) +
                                            " extends past the end of the recording");
        for (auto [name, idx] : {std::pair{"left_base", s.left_base_index},
                                 std::pair{"center", s.candidate.center_index},
                                 std::pair{"right_base", s.right_base_index}})
          csv << name << ',' << r.peak_id << ',' << fmt(static_cast<double>(idx) / fs) << ','
              << fmt(x[idx]) << '\n';
      }
      run.write(o->output, csv.str());
      run.manifest(o->output);
      run.out << "peaks: " << recs.size() << " -> " << o->output << '\n';
    }});
  }
  {
    auto* sub = plot->add_subcommand("culling", "Per-row feature values against bounds");
    struct Opts {
      Common c;
      std::string input, bounds, output;
      bool allow_unknown = false;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--input", o->input, "FeatureFile")->required();
    sub->add_option("--bounds", o->bounds, "CullConfig JSON")->required();
    sub->add_option("--output", o->output,
                    "CSV: id,feature,value,lower,upper,inside,predicted,label")->required();
    sub->add_flag("--allow-unknown-features", o->allow_unknown, "Accept non-catalog columns");
    leaves.push_back({sub, "plotdata culling", [o](Run& run) {
      const auto file = load_features(run, o->input, o->allow_unknown);
      const auto cfg = io::parse_cull_config(run.read(o->bounds));
      run.params = json::object();
      const auto& t = file.table;
      const auto pred = apply_bounds(t, cfg);
      std::string csv = "id,feature,value,lower,upper,inside,predicted,label\n";
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto& l = t.labels()[r];
        for (const auto& b : cfg.bounds) {
          const double v = t.value(r, t.require(b.feature));
          const bool inside = v >= b.lower && v <= b.upper;
          csv += io::csv_line({t.ids()[r], b.feature, fmt(v), fmt(b.lower), fmt(b.upper),
                               inside ? "1" : "0", pred[r] ? "blink" : "artifact",
                               l ? (*l ? "blink" : "artifact") : ""});
        }
      }
      run.write(o->output, csv);
      run.manifest(o->output);
      run.out << "rows: " << t.rows() << " x " << cfg.bounds.size() << " bounds -> " << o->output
              << '\n';
    }});
  }
  {
    auto* sub = plot->add_subcommand("survey", "Long-format scores per stage and scale");
    struct Opts {
      Common c;
      std::string input, output;
    };
    auto o = std::make_shared<Opts>();
    add_common(sub, o->c);
    sub->add_option("--input", o->input, "Scores CSV from survey score")->required();
    sub->add_option("--output", o->output, "CSV: participant_id,stage,scale,score")->required();
    leaves.push_back({sub, "plotdata survey", [o](Run& run) {
      const auto scores = io::parse_survey_scores(run.read(o->input));
      run.params = json::object();
      std::string csv = "participant_id,stage,scale,score\n";
      for (const auto& s : scores) {
        csv += io::csv_line({s.participant_id, s.stage, "positive_affect",
                             std::to_string(s.panas.positive_affect)});
        csv += io::csv_line({s.participant_id, s.stage, "negative_affect",
                             std::to_string(s.panas.negative_affect)});
        csv += io::csv_line(
            {s.participant_id, s.stage, "state_anxiety", std::to_string(s.state_anxiety)});
      }
      run.write(o->output, csv);
      run.manifest(o->output);
      run.out << "rows: " << scores.size() * 3 << " -> " << o->output << '\n';
    }});
  }
}

// ---------------------------------------------------------------- replay

int replay(const std::string& path, std::ostream& out, std::ostream& err) {
  json m;
  try {
    m = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, "manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!m.is_object() || !m.contains("argv") || !m["argv"].is_array())
    fail(ErrorKind::ConfigError, "manifest '" + path + "' has no argv");
  for (const auto& f : m.value("inputs", json::array())) {
    const auto p = f.at("path").get<std::string>();
    const auto h = io::hex64(io::fnv1a64(io::read_file(p)));
    if (h != f.at("fnv1a64").get<std::string>())
      fail(ErrorKind::ConfigError, "input '" + p + "' changed since the manifest was written");
  }
  const auto args = m["argv"].get<std::vector<std::string>>();
  const int code = run(args, out, err);
  if (code != 0) return code;
  std::size_t checked = 0;
  for (const auto& f : m.value("outputs", json::array())) {
    const auto p = f.at("path").get<std::string>();
    const auto h = io::hex64(io::fnv1a64(io::read_file(p)));
    if (h != f.at("fnv1a64").get<std::string>()) {
      err << "replay mismatch: " << p << " hash " << h << " != " << f.at("fnv1a64").get<std::string>()
          << '\n';
      return 4;
    }
    ++checked;
  }
  out << "replay ok: " << checked << " outputs identical\n";
  return 0;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::TooManyFeatures:
      return 2;
    case ErrorKind::ParseError:
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidChannel:
    case ErrorKind::InvalidSegment:
    case ErrorKind::DegenerateShape:
    case ErrorKind::DegenerateInput:
    case ErrorKind::InvalidResponse:
    case ErrorKind::SingularDesign:
      return 3;
  }
  return 4;
}

ExpandedArgs expand_config(const std::vector<std::string>& args) {
  ExpandedArgs out;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorKind::InvalidArgument, "--config needs a file path");
      out.config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      out.config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (out.config_path.empty()) {
    out.args = std::move(rest);
    return out;
  }
  out.config_text = io::read_file(out.config_path);
  json j;
  try {
    j = json::parse(out.config_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, "config '" + out.config_path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::ConfigError, "config must be a JSON object of flag values");
  std::vector<std::string> injected;
  auto scalar = [](const json& v, const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    fail(ErrorKind::ConfigError, "config value for '" + key + "' must be a string or number");
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "config") fail(ErrorKind::ConfigError, "config files cannot nest --config");
    const std::string flag = "--" + key;
    if (v.is_null()) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) injected.push_back(flag);
      continue;
    }
    std::string value;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) value += (i ? "," : "") + scalar(v[i], key);
    } else {
      value = scalar(v, key);
    }
    injected.push_back(flag);
    injected.push_back(value);
  }
  std::size_t head = 0;
  while (head < rest.size() && !rest[head].empty() && rest[head][0] != '-') ++head;
  out.args.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(head));
  out.args.insert(out.args.end(), injected.begin(), injected.end());
  out.args.insert(out.args.end(), rest.begin() + static_cast<std::ptrdiff_t>(head), rest.end());
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  try {
    if (!raw_args.empty() && raw_args[0] == "replay") {
      CLI::App app{"Rerun a pipeline from its manifest and verify the outputs", "blinkforge replay"};
      std::string manifest;
      app.add_option("--manifest", manifest, "Manifest JSON written beside a primary output")
          ->required();
      try {
        app.parse(std::vector<std::string>(raw_args.rbegin(), raw_args.rend() - 1));
      } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
      }
      return replay(manifest, out, err);
    }

    const ExpandedArgs expanded = expand_config(raw_args);
    CLI::App app{"EOG blink and EDA feature toolkit", "blinkforge"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.footer(
        "Pipelines: filter, detect, features eog|eda, cull individual|bfs|apply, sweep, shapley,\n"
        "survey score, synth blink|wire|eda, plotdata peaks|culling|survey, replay --manifest.\n"
        "Exit codes: 0 ok, 2 usage, 3 invalid data, 4 internal error.\n"
        "BLINKFORGE_THREADS caps worker threads.");
    std::vector<Leaf> leaves;
    add_filter(app, leaves);
    add_detect(app, leaves);
    auto* features = app.add_subcommand("features", "Feature extraction");
    features->require_subcommand(1);
    add_features_eog(features, leaves);
    add_features_eda(features, leaves);
    add_cull(app, leaves);
    add_sweep(app, leaves);
    add_shapley(app, leaves);
    add_survey(app, leaves);
    add_synth(app, leaves);
    add_plotdata(app, leaves);
    app.add_subcommand("replay", "Rerun a pipeline from its manifest (--manifest <path>)");

    try {
      app.parse(std::vector<std::string>(expanded.args.rbegin(), expanded.args.rend()));
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }

    for (const auto& leaf : leaves) {
      if (!leaf.app->parsed()) continue;
      Run run{out, err, leaf.name, expanded.args, expanded.config_path, "", std::nullopt,
              json::object(), {}, {}};
      if (!expanded.config_path.empty())
        run.config_hash = io::hex64(io::fnv1a64(expanded.config_text));
      if (auto* s = leaf.app->get_option("--seed"); s->count())
        run.seed = s->as<std::uint64_t>();
      leaf.action(run);
      return 0;
    }
    err << "no pipeline selected; see --help\n";
    return 2;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace blinkforge::cli
