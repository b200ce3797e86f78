#ifndef LEXADAPT_CORPUS_STATS_HPP_
#define LEXADAPT_CORPUS_STATS_HPP_

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexadapt/error.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

using Sentence = std::vector<std::string>;

// One token list per input line. Tokens are non-empty and contain no
// whitespace.
struct TokenizedCorpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
  bool operator==(const TokenizedCorpus&) const = default;
};

struct TokenizerRules {
  bool lowercase = true;
  // Characters stripped from both ends of every whitespace-separated chunk.
  std::string strip_chars = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
};

inline std::string normalize_token(std::string_view chunk, const TokenizerRules& rules) {
  std::size_t b = 0, e = chunk.size();
  while (b < e && rules.strip_chars.find(chunk[b]) != std::string::npos) ++b;
  while (e > b && rules.strip_chars.find(chunk[e - 1]) != std::string::npos) --e;
  std::string tok(chunk.substr(b, e - b));
  if (rules.lowercase) {
    // ASCII only; multibyte UTF-8 sequences pass through untouched.
    for (char& c : tok)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return tok;
}

inline TokenizedCorpus tokenize_corpus(std::string_view raw_text, const TokenizerRules& rules = {}) {
  text::validate_utf8(raw_text);
  TokenizedCorpus corpus;
  for (auto line : text::split_lines(raw_text)) {
    Sentence sentence;
    for (auto chunk : text::split_whitespace(line)) {
      auto tok = normalize_token(chunk, rules);
      if (!tok.empty()) sentence.push_back(std::move(tok));
    }
    if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

inline TokenizedCorpus load_corpus(const std::filesystem::path& path, const TokenizerRules& rules = {}) {
  return tokenize_corpus(text::read_file(path), rules);
}

using StopwordList = std::unordered_set<std::string>;

// One word per line; blank lines and '#' comments ignored; entries lowercased.
inline StopwordList parse_stopwords(std::string_view contents) {
  text::validate_utf8(contents);
  StopwordList out;
  for (auto line : text::split_lines(contents)) {
    if (text::is_blank_or_comment(line)) continue;
    std::string w(text::trim(line));
    for (char& c : w)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.insert(std::move(w));
  }
  return out;
}

inline StopwordList load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(text::read_file(path));
}

inline TokenizedCorpus remove_stopwords(const TokenizedCorpus& corpus, const StopwordList& stopwords) {
  TokenizedCorpus out;
  out.sentences.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    Sentence kept;
    for (const auto& tok : s)
      if (!stopwords.contains(tok)) kept.push_back(tok);
    out.sentences.push_back(std::move(kept));
  }
  return out;
}

struct WordCount {
  std::string word;
  std::size_t count = 0;
  bool operator==(const WordCount&) const = default;
};

// Sorted by count descending, ties by word ascending.
struct FrequencyTable {
  std::vector<WordCount> entries;

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& e : entries) t += e.count;
    return t;
  }
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

inline void sort_frequency_entries(std::vector<WordCount>& entries) {
  std::sort(entries.begin(), entries.end(), [](const WordCount& a, const WordCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
}

inline std::unordered_map<std::string, std::size_t> count_words(const TokenizedCorpus& corpus) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s) ++counts[tok];
  return counts;
}

inline FrequencyTable build_frequency_table(const TokenizedCorpus& corpus) {
  FrequencyTable table;
  for (auto& [w, c] : count_words(corpus)) table.entries.push_back({w, c});
  sort_frequency_entries(table.entries);
  return table;
}

struct VocabularySelection {
  std::size_t k = 0;
  std::vector<std::string> selected;
  double coverage = 0.95;
  std::size_t covered_count = 0;
  std::size_t total_count = 0;
};

// Minimal prefix of the frequency table whose counts reach `coverage` of
// the total mass.
inline VocabularySelection select_vocabulary(const FrequencyTable& table, double coverage = 0.95) {
  if (table.empty()) throw ContractError("select_vocabulary: frequency table is empty");
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw ConfigError("coverage must lie in (0, 1], got " + text::format_score(coverage));
  VocabularySelection sel;
  sel.coverage = coverage;
  sel.total_count = table.total();
  const double bound = coverage * static_cast<double>(sel.total_count);
  std::size_t sum = 0;
  for (const auto& e : table.entries) {
    sum += e.count;
    sel.selected.push_back(e.word);
    if (static_cast<double>(sum) >= bound) break;
  }
  sel.k = sel.selected.size();
  sel.covered_count = sum;
  return sel;
}

inline std::size_t word_frequency(const TokenizedCorpus& corpus, std::string_view word) {
  std::size_t n = 0;
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s)
      if (tok == word) ++n;
  return n;
}

}  // namespace lexadapt

#endif  // LEXADAPT_CORPUS_STATS_HPP_
