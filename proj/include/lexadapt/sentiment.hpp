#ifndef LEXADAPT_SENTIMENT_HPP_
#define LEXADAPT_SENTIMENT_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace lexadapt {

// Three-class polarity. The enumerator order is the fixed class order used
// by confusion matrices and reports.
enum class Sentiment : int { kNegative = 0, kNeutral = 1, kPositive = 2 };

inline constexpr std::array<Sentiment, 3> kAllSentiments = {
    Sentiment::kNegative, Sentiment::kNeutral, Sentiment::kPositive};

inline constexpr std::size_t index_of(Sentiment s) { return static_cast<std::size_t>(s); }

inline constexpr bool is_polar(Sentiment s) { return s != Sentiment::kNeutral; }

inline constexpr Sentiment opposite(Sentiment s) {
  switch (s) {
    case Sentiment::kNegative: return Sentiment::kPositive;
    case Sentiment::kPositive: return Sentiment::kNegative;
    default: return Sentiment::kNeutral;
  }
}

inline std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::kNegative: return "negative";
    case Sentiment::kNeutral: return "neutral";
    case Sentiment::kPositive: return "positive";
  }
  return "neutral";
}

inline std::optional<Sentiment> parse_sentiment(std::string_view text) {
  if (text == "negative") return Sentiment::kNegative;
  if (text == "neutral") return Sentiment::kNeutral;
  if (text == "positive") return Sentiment::kPositive;
  return std::nullopt;
}

// Five-class source label (SST-5 style). Three-class data uses the middle
// three values only.
enum class Label : int {
  kVeryNegative = 0,
  kNegative = 1,
  kNeutral = 2,
  kPositive = 3,
  kVeryPositive = 4,
};

enum class ClassMode { kThree, kFive };

inline std::string_view to_string(ClassMode m) { return m == ClassMode::kThree ? "three" : "five"; }

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::kVeryNegative: return "very_negative";
    case Label::kNegative: return "negative";
    case Label::kNeutral: return "neutral";
    case Label::kPositive: return "positive";
    case Label::kVeryPositive: return "very_positive";
  }
  return "neutral";
}

inline constexpr bool is_three_class(Label l) {
  return l == Label::kNegative || l == Label::kNeutral || l == Label::kPositive;
}

// Accepts the label names above; in five-class mode the SST digit
// convention 0..4 is accepted as well.
inline std::optional<Label> parse_label(std::string_view text, ClassMode mode) {
  std::optional<Label> out;
  if (text == "very_negative") out = Label::kVeryNegative;
  else if (text == "negative") out = Label::kNegative;
  else if (text == "neutral") out = Label::kNeutral;
  else if (text == "positive") out = Label::kPositive;
  else if (text == "very_positive") out = Label::kVeryPositive;
  else if (mode == ClassMode::kFive && text.size() == 1 && text[0] >= '0' && text[0] <= '4')
    out = static_cast<Label>(text[0] - '0');
  if (out && mode == ClassMode::kThree && !is_three_class(*out)) return std::nullopt;
  return out;
}

// Collapses the five source classes onto three polarities.
inline constexpr Sentiment collapse(Label l) {
  switch (l) {
    case Label::kVeryNegative:
    case Label::kNegative: return Sentiment::kNegative;
    case Label::kPositive:
    case Label::kVeryPositive: return Sentiment::kPositive;
    default: return Sentiment::kNeutral;
  }
}

inline constexpr Label to_label(Sentiment s) {
  switch (s) {
    case Sentiment::kNegative: return Label::kNegative;
    case Sentiment::kPositive: return Label::kPositive;
    default: return Label::kNeutral;
  }
}

}  // namespace lexadapt

#endif  // LEXADAPT_SENTIMENT_HPP_
