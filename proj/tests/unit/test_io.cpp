#include "blinkforge/io.hpp"
#include "blinkforge/signal.hpp"

#include "support.hpp"

#include <cstring>

using namespace blinkforge;
using namespace blinkforge::io;

TEST_CASE("shortest round-trip doubles") {
  blinkforge::Rng rng(71);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-12, 12));
    CHECK(parse_double(format_double(v), "x") == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(NAN) == "");
  CHECK(parse_double("+2.5", "x") == 2.5);
  CHECK_ERROR_KIND(parse_double("2.5abc", "x"), ErrorKind::ParseError);
  CHECK_ERROR_KIND(parse_double("", "x"), ErrorKind::ParseError);
  CHECK_ERROR_KIND(parse_double("inf", "x"), ErrorKind::ParseError);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const auto doc = parse_csv("# k=v\nx,y\n\"a,b\",\"c\"\"d\"\n\n1, 2\n");
  REQUIRE(doc.metadata.size() == 1);
  CHECK(doc.metadata[0].second == "v");
  REQUIRE(doc.rows.size() == 3);
  CHECK(doc.rows[1].fields == std::vector<std::string>{"a,b", "c\"d"});
  CHECK(doc.rows[2].fields[1] == "2");
  CHECK(doc.rows[2].line == 5);
}

TEST_CASE("recording round trip") {
  blinkforge::Rng rng(72);
  std::vector<double> x(300);
  for (double& v : x) v = rng.normal();
  Recording r(128.0, x, Channel::EDA);
  const auto text = format_recording(r);
  const auto back = parse_recording(text);
  CHECK(back.values() == r.values());
  CHECK(back.sample_rate_hz() == 128.0);
  CHECK(back.channel() == Channel::EDA);
  CHECK(format_recording(back) == text);
}

TEST_CASE("recording parse errors carry line numbers") {
  try {
    parse_recording("t_s,value\n0,1\n0.01,2\n0.02,3\n0.05,4\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::strstr(e.what(), "line 5") != nullptr);
  }
  CHECK_ERROR_KIND(parse_recording("value\n1\n2\n"), ErrorKind::ParseError);
  CHECK_ERROR_KIND(parse_recording("# channel=XYZ\nt_s,value\n0,1\n1,2\n"), ErrorKind::ParseError);
  const auto r = parse_recording("# sample_rate_hz=4\nvalue\n1\n2\n3\n");
  CHECK(r.size() == 3);
  CHECK(r.sample_rate_hz() == 4.0);
}

TEST_CASE("feature file round trip") {
  FeatureFile f;
  f.metadata = {{"kind", "eog"}};
  f.table = FeatureTable({"Signal Height", "Blink Duration"});
  f.table.add_row("3", std::vector<double>{0.25, NAN}, true);
  f.table.add_row("9", std::vector<double>{1e-7, 0.3}, false);
  const auto text = format_feature_file(f);
  const auto back = parse_feature_file(text);
  CHECK(format_feature_file(back) == text);
  CHECK(back.table.ids() == f.table.ids());
  CHECK(std::isnan(back.table.value(0, 1)));
  CHECK(back.table.labels()[1] == false);
  CHECK_ERROR_KIND(parse_feature_file("id,bogus\n1,2\n"), ErrorKind::ParseError);
  CHECK(parse_feature_file("id,bogus\n1,2\n", true).table.features() == 1);
  CHECK_ERROR_KIND(parse_feature_file("id,Signal Height,label\n1,2,maybe\n"), ErrorKind::ParseError);
}

TEST_CASE("segments and truth round trip") {
  SegmentRecord s;
  s.peak_id = 4;
  s.segment.candidate = {120, 0.51, 0.4, 0.21};
  s.segment.left_base_index = 100;
  s.segment.right_base_index = 150;
  s.segment.edge_truncated = true;
  s.label = false;
  const auto text = format_segments({s}, 100.0);
  const auto back = parse_segments(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].segment.candidate.prominence == 0.4);
  CHECK(back[0].segment.edge_truncated);
  CHECK(format_segments(back, 100.0) == text);

  GroundTruth t{EventKind::Wire, 3.25, 325, 2.5, 4.0, 0.7, 1.5};
  const auto tt = format_truth({t});
  CHECK(format_truth(parse_truth(tt)) == tt);
}

TEST_CASE("cull config json") {
  CullConfig c;
  c.set("Blink Duration", 0.1, 0.4);
  c.set("Signal Entropy", 1, 2.5);
  const auto text = format_cull_config(c);
  const auto back = parse_cull_config(text);
  CHECK(format_cull_config(back) == text);
  CHECK(back.bounds[0].feature == "Blink Duration");
  CHECK_ERROR_KIND(parse_cull_config("{\"a\": [2, 1]}"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse_cull_config("{\"a\": 1"), ErrorKind::ConfigError);
}

TEST_CASE("synth spec json") {
  SynthSpec s = default_blink_spec();
  s.seed = 99;
  s.events = {{EventKind::Blink, 2.0, 0.5, 0.3, 0.3}};
  const auto text = format_synth_spec(s);
  const auto back = parse_synth_spec(text, SynthSpec{});
  CHECK(format_synth_spec(back) == text);
  CHECK_ERROR_KIND(parse_synth_spec("{\"sed\": 1}", SynthSpec{}), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse_synth_spec("{\"duration_s\": -1}", SynthSpec{}), ErrorKind::ConfigError);
}

TEST_CASE("survey files") {
  std::string text = "participant_id,stage,item,value\n";
  for (auto i : panas::kPositiveItems) text += "p1,Baseline," + std::string(i) + ",2\n";
  for (auto i : panas::kNegativeItems) text += "p1,Baseline," + std::string(i) + ",3\n";
  for (const auto& i : stai_items(StaiRoster::Standard)) text += "p1,Baseline," + std::string(i.name) + ",1\n";
  const auto sessions = parse_survey_responses(text, StaiRoster::Standard);
  REQUIRE(sessions.size() == 1);
  CHECK(score_panas(sessions[0].response).positive_affect == 10);
  CHECK_ERROR_KIND(parse_survey_responses(text + "p1,Baseline,Alert,2\n", StaiRoster::Standard),
                   ErrorKind::InvalidResponse);
  CHECK_ERROR_KIND(parse_survey_responses(text + "p1,Lunch,Alert,2\n", StaiRoster::Standard),
                   ErrorKind::InvalidResponse);
  io::SurveyScore sc{"p1", "CPT", {11, 7}, 44};
  const auto st = format_survey_scores({sc});
  CHECK(format_survey_scores(parse_survey_scores(st)) == st);
}

TEST_CASE("atomic write replaces content") {
  const std::string path = "io_atomic_test.txt";
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(read_file(path) == "two");
  std::remove(path.c_str());
  CHECK_ERROR_KIND(read_file("/nonexistent/file"), ErrorKind::InvalidArgument);
}
