#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blinkforge {

namespace panas {
inline constexpr std::array<std::string_view, 5> kPositiveItems = {
    "Alert", "Inspired", "Determined", "Attentive", "Active"};
inline constexpr std::array<std::string_view, 5> kNegativeItems = {
    "Upset", "Hostile", "Ashamed", "Nervous", "Afraid"};
}  // namespace panas

enum class Polarity { Positive, Negative };

struct StaiItem {
  std::string_view name;
  Polarity polarity;
};

// Standard: the 20-item state form (total 20-80). Study: the 19 items of the
// study questionnaire as printed (total 19-76).
enum class StaiRoster { Standard, Study };

StaiRoster stai_roster_from_string(std::string_view name);
std::string_view to_string(StaiRoster roster) noexcept;
const std::vector<StaiItem>& stai_items(StaiRoster roster);
std::pair<int, int> stai_range(StaiRoster roster);
// Non-empty for rosters whose totals do not span the usual 20-80 scale.
std::optional<std::string> roster_warning(StaiRoster roster);

struct SurveyResponse {
  std::map<std::string, int, std::less<>> panas;  // 1..5
  std::map<std::string, int, std::less<>> stai;   // 1..4
};

struct PanasScore {
  int positive_affect = 0;  // 5..25
  int negative_affect = 0;  // 5..25
};

// Missing or out-of-range items throw InvalidResponse.
PanasScore score_panas(const SurveyResponse& resp);
// Negative items count as answered, positive items as 5 - value.
int score_stai_state(const SurveyResponse& resp, StaiRoster roster = StaiRoster::Standard);

bool is_panas_item(std::string_view item);
bool is_stai_item(std::string_view item, StaiRoster roster);

}  // namespace blinkforge
