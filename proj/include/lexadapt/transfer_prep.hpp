#ifndef LEXADAPT_TRANSFER_PREP_HPP_
#define LEXADAPT_TRANSFER_PREP_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexadapt/corpus_stats.hpp"
#include "lexadapt/error.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

enum class Provenance { kSource, kTarget };

inline std::string_view to_string(Provenance p) { return p == Provenance::kSource ? "source" : "target"; }

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pos_tags;  // parallel to tokens
  Label label = Label::kNeutral;
  Provenance provenance = Provenance::kSource;
  bool operator==(const LabeledSentence&) const = default;
};

struct LabeledDataset {
  std::vector<LabeledSentence> sentences;
  ClassMode class_mode = ClassMode::kThree;

  std::size_t size() const { return sentences.size(); }
};

inline void check_dataset(const LabeledDataset& ds) {
  for (std::size_t i = 0; i < ds.sentences.size(); ++i) {
    const auto& s = ds.sentences[i];
    if (ds.class_mode == ClassMode::kThree && !is_three_class(s.label))
      throw ContractError("sentence " + std::to_string(i) + " has a five-class label in a three-class dataset");
    if (s.pos_tags && s.pos_tags->size() != s.tokens.size())
      throw ContractError("sentence " + std::to_string(i) + " has mismatched token and tag counts");
  }
}

struct DatasetFormat {
  ClassMode class_mode = ClassMode::kThree;
  bool tagged = false;  // tokens written as "<token>_<TAG>"
};

// "<label>\t<token token ...>[\t<source|target>]". Tokens are lowercased
// (ASCII) so they match the corpus tokenizer.
inline LabeledDataset parse_dataset(std::string_view contents, DatasetFormat fmt,
                                    const std::string& source = "<dataset>") {
  text::validate_utf8(contents);
  LabeledDataset ds;
  ds.class_mode = fmt.class_mode;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() < 2 || c.size() > 3) throw ParseError(source, ln, "expected '<label>\\t<tokens>'");
    LabeledSentence s;
    auto label = parse_label(text::trim(c[0]), fmt.class_mode);
    if (!label) throw ParseError(source, ln, "unknown label '" + std::string(c[0]) + "'");
    s.label = *label;
    if (c.size() == 3) {
      if (c[2] == "source") s.provenance = Provenance::kSource;
      else if (c[2] == "target") s.provenance = Provenance::kTarget;
      else throw ParseError(source, ln, "unknown provenance '" + std::string(c[2]) + "'");
    }
    if (fmt.tagged) s.pos_tags.emplace();
    for (auto chunk : text::split_whitespace(c[1])) {
      std::string tok(chunk);
      if (fmt.tagged) {
        auto us = tok.rfind('_');
        if (us == std::string::npos || us == 0 || us + 1 == tok.size())
          throw ParseError(source, ln, "token '" + tok + "' lacks a '_<TAG>' suffix");
        s.pos_tags->push_back(tok.substr(us + 1));
        tok.resize(us);
      }
      for (char& ch : tok)
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      s.tokens.push_back(std::move(tok));
    }
    ds.sentences.push_back(std::move(s));
  }
  return ds;
}

inline LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat fmt) {
  return parse_dataset(text::read_file(path), fmt, path.string());
}

inline std::string format_dataset(const LabeledDataset& ds, bool with_provenance = false) {
  std::string out;
  for (const auto& s : ds.sentences) {
    out += to_string(s.label);
    out += '\t';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out += ' ';
      out += s.tokens[i];
      if (s.pos_tags) out += '_' + (*s.pos_tags)[i];
    }
    if (with_provenance) {
      out += '\t';
      out += to_string(s.provenance);
    }
    out += '\n';
  }
  return out;
}

inline LabeledDataset map_labels_5to3(const LabeledDataset& ds) {
  if (ds.class_mode != ClassMode::kFive) throw ContractError("map_labels_5to3: dataset is not five-class");
  LabeledDataset out = ds;
  out.class_mode = ClassMode::kThree;
  for (auto& s : out.sentences) s.label = to_label(collapse(s.label));
  return out;
}

using DeviatedMap = std::map<std::string, Sentiment>;

struct Removal {
  std::size_t index = 0;  // position in the input dataset
  Label label = Label::kNeutral;
  std::vector<std::string> triggers;  // conflicting deviated words, first-seen order
};

struct FilterResult {
  LabeledDataset dataset;
  std::vector<Removal> removals;
};

// Drops every sentence containing a deviated word whose legal sentiment
// differs from the sentence label.
inline FilterResult filter_negative_transfer(const LabeledDataset& ds, const DeviatedMap& deviated) {
  if (ds.class_mode != ClassMode::kThree)
    throw ContractError("filter_negative_transfer: dataset must be three-class");
  FilterResult r;
  r.dataset.class_mode = ClassMode::kThree;
  for (std::size_t i = 0; i < ds.sentences.size(); ++i) {
    const auto& s = ds.sentences[i];
    const Sentiment label = collapse(s.label);
    std::vector<std::string> triggers;
    for (const auto& tok : s.tokens) {
      auto it = deviated.find(tok);
      if (it != deviated.end() && it->second != label &&
          std::find(triggers.begin(), triggers.end(), tok) == triggers.end())
        triggers.push_back(tok);
    }
    if (triggers.empty()) r.dataset.sentences.push_back(s);
    else r.removals.push_back({i, s.label, std::move(triggers)});
  }
  return r;
}

inline std::string format_removals(const LabeledDataset& input, const std::vector<Removal>& removals) {
  std::string out;
  for (const auto& rm : removals) {
    out += std::to_string(rm.index) + '\t' + std::string(to_string(rm.label)) + '\t' + text::join(rm.triggers, ",") +
           '\t' + text::join(input.sentences[rm.index].tokens, " ") + '\n';
  }
  return out;
}

struct SampledSentence {
  std::string word;
  std::size_t sentence_index = 0;
  bool operator==(const SampledSentence&) const = default;
};

struct Shortfall {
  std::string word;
  std::size_t found = 0;
  std::size_t requested = 0;
};

struct SampleResult {
  std::vector<SampledSentence> samples;  // grouped by word, indices ascending
  std::vector<Shortfall> shortfalls;
};

namespace detail {

// Unbiased integer in [0, n) from the raw engine output. Avoids the
// implementation-defined distributions so selections are portable.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng(); while (x >= limit);
  return x % n;
}

inline std::mt19937_64 word_rng(std::uint64_t seed, std::string_view word) {
  const std::uint64_t h = text::fnv1a64(word);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

// Picks up to `per_word` distinct sentences containing each word, uniformly
// without replacement. Each word has its own generator derived from the
// seed and the word, so a word's picks do not depend on the other words.
inline SampleResult sample_sentences_for_words(const TokenizedCorpus& corpus, const WordSet& words,
                                               std::size_t per_word = 2, std::uint64_t seed = 0) {
  if (per_word == 0) throw ConfigError("sample_sentences_for_words: per_word must be at least 1");
  std::map<std::string, std::vector<std::size_t>> hits;
  for (const auto& w : words) hits[w];
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    std::set<std::string_view> seen;
    for (const auto& tok : corpus.sentences[i]) {
      if (!seen.insert(tok).second) continue;
      auto it = hits.find(tok);
      if (it != hits.end()) it->second.push_back(i);
    }
  }
  SampleResult r;
  for (auto& [w, idx] : hits) {
    std::vector<std::size_t> chosen;
    if (idx.size() <= per_word) {
      chosen = idx;
      if (idx.size() < per_word) r.shortfalls.push_back({w, idx.size(), per_word});
    } else {
      auto rng = detail::word_rng(seed, w);
      for (std::size_t k = 0; k < per_word; ++k) {
        const std::size_t j = k + detail::bounded(rng, idx.size() - k);
        std::swap(idx[k], idx[j]);
      }
      chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(per_word));
      std::sort(chosen.begin(), chosen.end());
    }
    for (auto i : chosen) r.samples.push_back({w, i});
  }
  return r;
}

// "<word>\t<sentence_index>\t<sentence>" rows.
inline std::string format_samples(const TokenizedCorpus& corpus, const SampleResult& r) {
  std::string out;
  for (const auto& s : r.samples)
    out += s.word + '\t' + std::to_string(s.sentence_index) + '\t' +
           text::join(corpus.sentences[s.sentence_index], " ") + '\n';
  return out;
}

// Concatenates D (source domain) and the annotated target-domain sentences.
inline LabeledDataset merge_datasets(const LabeledDataset& filtered, const LabeledDataset& legal) {
  if (filtered.class_mode != ClassMode::kThree || legal.class_mode != ClassMode::kThree)
    throw ContractError("merge_datasets: both datasets must be three-class");
  LabeledDataset out;
  out.class_mode = ClassMode::kThree;
  out.sentences.reserve(filtered.size() + legal.size());
  for (auto s : filtered.sentences) {
    s.provenance = Provenance::kSource;
    out.sentences.push_back(std::move(s));
  }
  for (auto s : legal.sentences) {
    s.provenance = Provenance::kTarget;
    out.sentences.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PoS-preserving substitution of deviated words.

using SubstitutionMap = std::map<std::string, std::string>;  // PoS tag -> replacement
using SubstitutionMaps = std::map<Sentiment, SubstitutionMap>;

// Positive-class replacements.
inline SubstitutionMap positive_substitution_map() {
  return {{"JJ", "beautiful"},     {"JJR", "better"},       {"JJS", "best"},       {"NN", "masterpiece"},
          {"NNS", "masterpieces"}, {"RB", "beautifully"},   {"RBR", "beautifully"}, {"RBS", "beautifully"},
          {"VB", "reward"},        {"VBZ", "appreciates"},  {"VBP", "reward"},     {"VBD", "won"},
          {"VBN", "won"},          {"VBG", "pleasing"}};
}

// Placeholder negative-class replacements; override with a map file.
inline SubstitutionMap default_negative_substitution_map() {
  return {{"JJ", "bad"},        {"JJR", "worse"},      {"JJS", "worst"},    {"NN", "disaster"},
          {"NNS", "disasters"}, {"RB", "badly"},       {"RBR", "worse"},    {"RBS", "worst"},
          {"VB", "hate"},       {"VBZ", "hates"},      {"VBP", "hate"},     {"VBD", "hated"},
          {"VBN", "hated"},     {"VBG", "hating"}};
}

// Placeholder neutral-class replacements; override with a map file.
inline SubstitutionMap default_neutral_substitution_map() {
  return {{"JJ", "usual"},    {"JJR", "later"},    {"JJS", "latest"},   {"NN", "thing"},
          {"NNS", "things"},  {"RB", "usually"},   {"RBR", "later"},    {"RBS", "most"},
          {"VB", "go"},       {"VBZ", "goes"},     {"VBP", "go"},       {"VBD", "went"},
          {"VBN", "gone"},    {"VBG", "going"}};
}

inline SubstitutionMaps default_substitution_maps() {
  return {{Sentiment::kPositive, positive_substitution_map()},
          {Sentiment::kNegative, default_negative_substitution_map()},
          {Sentiment::kNeutral, default_neutral_substitution_map()}};
}

inline SubstitutionMap parse_substitution_map(std::string_view contents, const std::string& source = "<map>") {
  text::validate_utf8(contents);
  SubstitutionMap m;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() != 2) throw ParseError(source, i + 1, "expected '<TAG>\\t<word>'");
    std::string tag(text::trim(c[0])), word(text::trim(c[1]));
    if (tag.empty() || word.empty()) throw ParseError(source, i + 1, "empty tag or replacement");
    if (!m.emplace(tag, word).second) throw ParseError(source, i + 1, "duplicate tag '" + tag + "'");
  }
  return m;
}

inline SubstitutionMap load_substitution_map(const std::filesystem::path& path) {
  return parse_substitution_map(text::read_file(path), path.string());
}

struct UnmappedToken {
  std::size_t position = 0;
  std::string word;
  std::string tag;
};

struct SubstitutionResult {
  LabeledSentence sentence;
  std::vector<std::size_t> replaced;  // token positions
  std::vector<UnmappedToken> unmapped;
};

inline SubstitutionResult substitute_deviated_words(const LabeledSentence& sentence, const DeviatedMap& deviated,
                                                    const SubstitutionMaps& maps) {
  if (!sentence.pos_tags) throw ContractError("substitute_deviated_words: sentence has no PoS tags");
  const auto& tags = *sentence.pos_tags;
  if (tags.size() != sentence.tokens.size()) throw ContractError("token and tag counts differ");
  SubstitutionResult r{sentence, {}, {}};
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    auto dv = deviated.find(sentence.tokens[i]);
    if (dv == deviated.end()) continue;
    auto mp = maps.find(dv->second);
    if (mp == maps.end())
      throw ContractError("no substitution map for the " + std::string(to_string(dv->second)) + " class");
    auto rep = mp->second.find(tags[i]);
    if (rep == mp->second.end()) {
      r.unmapped.push_back({i, sentence.tokens[i], tags[i]});
      continue;
    }
    r.sentence.tokens[i] = rep->second;
    r.replaced.push_back(i);
  }
  return r;
}

}  // namespace lexadapt

#endif  // LEXADAPT_TRANSFER_PREP_HPP_
