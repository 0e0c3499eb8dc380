#include "blinkforge/surveys.hpp"

#include "blinkforge/error.hpp"

#include <algorithm>

namespace blinkforge {
namespace {

std::vector<StaiItem> study_items() {
  using enum Polarity;
  return {
      {"I feel calm", Positive},
      {"I feel secure", Positive},
      {"I am tense", Negative},
      {"I feel strained", Negative},
      {"I feel at ease", Positive},
      {"I feel upset", Negative},
      {"I am presently worrying over possible misfortunes", Negative},
      {"I feel satisfied", Positive},
      {"I feel frightened", Negative},
      {"I feel comfortable", Positive},
      {"I feel self-confident", Positive},
      {"I feel nervous", Negative},
      {"I am jittery", Negative},
      {"I feel indecisive", Negative},
      {"I am relaxed", Positive},
      {"I feel content", Positive},
      {"I am worried", Negative},
      {"I feel confused", Negative},
      {"I feel steady", Positive},
  };
}

int item_value(const std::map<std::string, int, std::less<>>& items, std::string_view name,
               int lo, int hi) {
  const auto it = items.find(name);
  if (it == items.end())
    fail(ErrorKind::InvalidResponse, "missing survey item '" + std::string(name) + "'");
  if (it->second < lo || it->second > hi)
    fail(ErrorKind::InvalidResponse, "item '" + std::string(name) + "' = " +
                                         std::to_string(it->second) + " outside " +
                                         std::to_string(lo) + ".." + std::to_string(hi));
  return it->second;
}

}  // namespace

StaiRoster stai_roster_from_string(std::string_view name) {
  if (name == "standard") return StaiRoster::Standard;
  if (name == "study") return StaiRoster::Study;
  fail(ErrorKind::InvalidArgument, "unknown STAI roster '" + std::string(name) + "'");
}

std::string_view to_string(StaiRoster roster) noexcept {
  return roster == StaiRoster::Standard ? "standard" : "study";
}

const std::vector<StaiItem>& stai_items(StaiRoster roster) {
  static const std::vector<StaiItem> study = study_items();
  static const std::vector<StaiItem> standard = [] {
    auto items = study_items();
    items.push_back({"I feel pleasant", Polarity::Positive});
    return items;
  }();
  return roster == StaiRoster::Standard ? standard : study;
}

std::pair<int, int> stai_range(StaiRoster roster) {
  const int n = static_cast<int>(stai_items(roster).size());
  return {n, 4 * n};
}

std::optional<std::string> roster_warning(StaiRoster roster) {
  if (roster == StaiRoster::Standard) return std::nullopt;
  return "WARNING: the study STAI roster has 19 items (9 positive, 10 negative); totals span "
         "19-76, not the 20-80 scale, and one item of the 30-item questionnaire is "
         "unidentified";
}

bool is_panas_item(std::string_view item) {
  return std::find(panas::kPositiveItems.begin(), panas::kPositiveItems.end(), item) !=
             panas::kPositiveItems.end() ||
         std::find(panas::kNegativeItems.begin(), panas::kNegativeItems.end(), item) !=
             panas::kNegativeItems.end();
}

bool is_stai_item(std::string_view item, StaiRoster roster) {
  const auto& items = stai_items(roster);
  return std::any_of(items.begin(), items.end(),
                     [&](const StaiItem& s) { return s.name == item; });
}

PanasScore score_panas(const SurveyResponse& resp) {
  PanasScore s;
  for (auto name : panas::kPositiveItems) s.positive_affect += item_value(resp.panas, name, 1, 5);
  for (auto name : panas::kNegativeItems) s.negative_affect += item_value(resp.panas, name, 1, 5);
  return s;
}

int score_stai_state(const SurveyResponse& resp, StaiRoster roster) {
  int total = 0;
  for (const auto& item : stai_items(roster)) {
    const int v = item_value(resp.stai, item.name, 1, 4);
    total += item.polarity == Polarity::Positive ? 5 - v : v;
  }
  return total;
}

}  // namespace blinkforge
