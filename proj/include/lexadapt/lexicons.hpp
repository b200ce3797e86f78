#ifndef LEXADAPT_LEXICONS_HPP_
#define LEXADAPT_LEXICONS_HPP_

#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexadapt/error.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

using WordSet = std::set<std::string>;
using LabelMap = std::map<std::string, Label>;

// "<word>\t<label>" rows. Blank lines and '#' comments are skipped.
inline LabelMap parse_sentiment_labels(std::string_view contents, ClassMode mode,
                                       const std::string& source = "<labels>") {
  text::validate_utf8(contents);
  LabelMap out;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto cols = text::split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(source, i + 1, "expected '<word>\\t<label>'");
    std::string word(text::trim(cols[0]));
    if (word.empty()) throw ParseError(source, i + 1, "empty word");
    auto label = parse_label(text::trim(cols[1]), mode);
    if (!label)
      throw ParseError(source, i + 1,
                       "unknown label '" + std::string(cols[1]) + "' for " + std::string(to_string(mode)) +
                           "-class mode");
    if (!out.emplace(word, *label).second) throw ParseError(source, i + 1, "duplicate word '" + word + "'");
  }
  return out;
}

inline LabelMap load_sentiment_labels(const std::filesystem::path& path, ClassMode mode) {
  return parse_sentiment_labels(text::read_file(path), mode, path.string());
}

// Source-annotated sentiment of the considered vocabulary.
struct SeedPartition {
  WordSet positive;  // P_M
  WordSet negative;  // N_M
  WordSet neutral;   // O_M

  std::optional<Sentiment> sentiment_of(const std::string& w) const {
    if (positive.contains(w)) return Sentiment::kPositive;
    if (negative.contains(w)) return Sentiment::kNegative;
    if (neutral.contains(w)) return Sentiment::kNeutral;
    return std::nullopt;
  }
  std::size_t size() const { return positive.size() + negative.size() + neutral.size(); }
  bool contains(const std::string& w) const { return sentiment_of(w).has_value(); }
};

// Throws ContractError unless the three sets are pairwise disjoint and
// (when given) cover exactly `universe`.
template <typename Range>
void check_partition(const SeedPartition& p, const Range& universe) {
  for (const auto& w : p.positive)
    if (p.negative.contains(w) || p.neutral.contains(w))
      throw ContractError("seed partition: '" + w + "' is in more than one set");
  for (const auto& w : p.negative)
    if (p.neutral.contains(w)) throw ContractError("seed partition: '" + w + "' is in more than one set");
  std::size_t n = 0;
  for (const auto& w : universe) {
    ++n;
    if (!p.contains(w)) throw ContractError("seed partition does not cover '" + w + "'");
  }
  if (n != p.size()) throw ContractError("seed partition contains words outside the vocabulary");
}

template <typename Range>
SeedPartition partition_seed(const LabelMap& labels, const Range& words) {
  SeedPartition p;
  for (const auto& w : words) {
    auto it = labels.find(w);
    if (it == labels.end()) throw ContractError("no source label for vocabulary word '" + w + "'");
    switch (collapse(it->second)) {
      case Sentiment::kPositive: p.positive.insert(w); break;
      case Sentiment::kNegative: p.negative.insert(w); break;
      case Sentiment::kNeutral: p.neutral.insert(w); break;
    }
  }
  check_partition(p, words);
  return p;
}

class AfinnLexicon {
 public:
  AfinnLexicon() = default;
  explicit AfinnLexicon(std::map<std::string, int> scores) : scores_(std::move(scores)) {
    for (const auto& [w, s] : scores_)
      if (s < -5 || s > 5) throw ContractError("AFINN score out of range for '" + w + "'");
  }

  bool contains(const std::string& w) const { return scores_.contains(w); }
  std::optional<int> score(const std::string& w) const {
    auto it = scores_.find(w);
    if (it == scores_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, int>& scores() const { return scores_; }
  std::size_t size() const { return scores_.size(); }
  std::size_t skipped_multiword() const { return skipped_multiword_; }

  friend AfinnLexicon parse_afinn(std::string_view, const std::string&);

 private:
  std::map<std::string, int> scores_;
  std::size_t skipped_multiword_ = 0;
};

// "<word>\t<integer>" rows; multiword entries are counted and skipped.
inline AfinnLexicon parse_afinn(std::string_view contents, const std::string& source = "<afinn>") {
  text::validate_utf8(contents);
  AfinnLexicon lex;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto cols = text::split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(source, i + 1, "expected '<word>\\t<score>'");
    std::string word(text::trim(cols[0]));
    auto num = text::trim(cols[1]);
    int score = 0;
    const char* first = num.data();
    if (!num.empty() && num.front() == '+') ++first;
    auto [p, ec] = std::from_chars(first, num.data() + num.size(), score);
    if (ec != std::errc() || p != num.data() + num.size())
      throw ParseError(source, i + 1, "malformed score '" + std::string(num) + "'");
    if (score < -5 || score > 5) throw ParseError(source, i + 1, "score outside [-5, 5]");
    if (word.find(' ') != std::string::npos) {
      ++lex.skipped_multiword_;
      continue;
    }
    if (!lex.scores_.emplace(word, score).second)
      throw ParseError(source, i + 1, "duplicate word '" + word + "'");
  }
  return lex;
}

inline AfinnLexicon load_afinn(const std::filesystem::path& path) {
  return parse_afinn(text::read_file(path), path.string());
}

// Polarity by sign of the AFINN score; nullopt when the word is not in A.
inline std::optional<Sentiment> afinn_sentiment(const AfinnLexicon& lexicon, const std::string& w) {
  auto s = lexicon.score(w);
  if (!s) return std::nullopt;
  if (*s > 0) return Sentiment::kPositive;
  if (*s < 0) return Sentiment::kNegative;
  return Sentiment::kNeutral;
}

class AntonymList {
 public:
  void add(const std::string& u, const std::string& v) {
    if (u == v) throw ContractError("antonym self-pair '" + u + "'");
    pairs_.insert(key(u, v));
  }
  bool contains(const std::string& u, const std::string& v) const {
    return u != v && pairs_.contains(key(u, v));
  }
  std::size_t size() const { return pairs_.size(); }
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  static std::pair<std::string, std::string> key(const std::string& u, const std::string& v) {
    return u < v ? std::pair{u, v} : std::pair{v, u};
  }
  std::set<std::pair<std::string, std::string>> pairs_;
};

inline AntonymList parse_antonyms(std::string_view contents, const std::string& source = "<antonyms>") {
  text::validate_utf8(contents);
  AntonymList list;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto cols = text::split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(source, i + 1, "expected '<word1>\\t<word2>'");
    std::string u(text::trim(cols[0])), v(text::trim(cols[1]));
    if (u.empty() || v.empty()) throw ParseError(source, i + 1, "empty word");
    if (u == v) throw ParseError(source, i + 1, "self-pair '" + u + "'");
    list.add(u, v);
  }
  return list;
}

inline AntonymList load_antonyms(const std::filesystem::path& path) {
  return parse_antonyms(text::read_file(path), path.string());
}

inline bool are_antonyms(const AntonymList& list, const std::string& u, const std::string& v) {
  return list.contains(u, v);
}

}  // namespace lexadapt

#endif  // LEXADAPT_LEXICONS_HPP_
