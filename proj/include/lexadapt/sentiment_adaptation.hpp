#ifndef LEXADAPT_SENTIMENT_ADAPTATION_HPP_
#define LEXADAPT_SENTIMENT_ADAPTATION_HPP_

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexadapt/domain_analysis.hpp"
#include "lexadapt/error.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

// Which rule produced an assignment.
//   Neutral seed words:  R1 AFINN, R2 neighbour transfer, R3 default neutral.
//   Polar seed words:    R4 keep (generic), R5 neighbour flips polarity,
//                        R5b neighbour corroborates, R6 AFINN, R7 neutral.
enum class RuleId { kR1, kR2, kR3, kR4, kR5, kR5b, kR6, kR7 };

inline std::string_view to_string(RuleId r) {
  switch (r) {
    case RuleId::kR1: return "R1";
    case RuleId::kR2: return "R2";
    case RuleId::kR3: return "R3";
    case RuleId::kR4: return "R4";
    case RuleId::kR5: return "R5";
    case RuleId::kR5b: return "R5b";
    case RuleId::kR6: return "R6";
    case RuleId::kR7: return "R7";
  }
  return "R3";
}

inline std::optional<RuleId> parse_rule_id(std::string_view s) {
  static constexpr RuleId kAll[] = {RuleId::kR1, RuleId::kR2, RuleId::kR3,  RuleId::kR4,
                                    RuleId::kR5, RuleId::kR5b, RuleId::kR6, RuleId::kR7};
  for (RuleId r : kAll)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

enum class RulePrecedence {
  kAfinnFirst,     // R1 before R2
  kNeighborFirst,  // R2 before R1
};

struct AdaptationOptions {
  RulePrecedence precedence = RulePrecedence::kAfinnFirst;
  // Limits R2 to under-represented or domain-specific words.
  bool restrict_neighbor_transfer = false;
};

struct Assignment {
  std::string word;
  Sentiment source = Sentiment::kNeutral;
  Sentiment assigned = Sentiment::kNeutral;
  RuleId rule = RuleId::kR3;
  bool operator==(const Assignment&) const = default;
};

struct DeviationSets {
  WordSet negative;  // D_on: neutral seed words assigned negative
  WordSet positive;  // D_op: neutral seed words assigned positive
};

struct NeutralAdaptation {
  std::vector<Assignment> assignments;
  DeviationSets deviations;
};

namespace detail {

inline const WordProfile& profile_for(const ProfileMap& profiles, const std::string& w) {
  auto it = profiles.find(w);
  if (it == profiles.end()) throw ContractError("no profile for word '" + w + "'");
  return it->second;
}

// l(w) exists, is domain generic, and is not an antonym of w.
inline bool neighbor_usable(const WordProfile& p) { return p.l_w && p.l_w_domain_generic && p.not_antonyms; }

inline std::optional<Sentiment> polar_afinn(const WordProfile& p, const AfinnLexicon& afinn) {
  if (!p.afinn_assignable) return std::nullopt;
  auto s = afinn_sentiment(afinn, p.word);
  if (!s || !is_polar(*s)) return std::nullopt;
  return s;
}

}  // namespace detail

// Reassigns the neutral seed words O_M (rules R1-R3).
inline NeutralAdaptation adapt_neutral_words(const WordSet& neutral_seed, const ProfileMap& profiles,
                                             const AfinnLexicon& afinn, const AdaptationOptions& opts = {}) {
  NeutralAdaptation out;
  for (const auto& w : neutral_seed) {
    const WordProfile& p = detail::profile_for(profiles, w);

    std::optional<Assignment> via_afinn;
    if (p.under_represented || p.domain_specific)
      if (auto s = detail::polar_afinn(p, afinn)) via_afinn = Assignment{w, Sentiment::kNeutral, *s, RuleId::kR1};

    std::optional<Assignment> via_neighbor;
    const bool r2_allowed = !opts.restrict_neighbor_transfer || p.under_represented || p.domain_specific;
    if (r2_allowed && detail::neighbor_usable(p) && p.source_sentiment_of_l_w && is_polar(*p.source_sentiment_of_l_w))
      via_neighbor = Assignment{w, Sentiment::kNeutral, *p.source_sentiment_of_l_w, RuleId::kR2};

    Assignment a{w, Sentiment::kNeutral, Sentiment::kNeutral, RuleId::kR3};
    if (opts.precedence == RulePrecedence::kAfinnFirst) {
      if (via_afinn) a = *via_afinn;
      else if (via_neighbor) a = *via_neighbor;
    } else {
      if (via_neighbor) a = *via_neighbor;
      else if (via_afinn) a = *via_afinn;
    }
    if (a.assigned == Sentiment::kNegative) out.deviations.negative.insert(w);
    if (a.assigned == Sentiment::kPositive) out.deviations.positive.insert(w);
    out.assignments.push_back(std::move(a));
  }
  return out;
}

// Rules R4-R7 for one polar seed word with source polarity `s`.
inline Assignment adapt_polar_word(const WordProfile& p, Sentiment s, const AfinnLexicon& afinn) {
  if (!is_polar(s)) throw ContractError("adapt_polar_word: '" + p.word + "' is not polar in the seed");
  if (p.domain_generic) return {p.word, s, s, RuleId::kR4};
  if (detail::neighbor_usable(p) && p.source_sentiment_of_l_w) {
    if (*p.source_sentiment_of_l_w == opposite(s)) return {p.word, s, opposite(s), RuleId::kR5};
    if (*p.source_sentiment_of_l_w == s) return {p.word, s, s, RuleId::kR5b};
  }
  if (auto a = detail::polar_afinn(p, afinn)) return {p.word, s, *a, RuleId::kR6};
  return {p.word, s, Sentiment::kNeutral, RuleId::kR7};
}

// Reassigns P_M and N_M. Output follows P_M then N_M, each in
// word order.
inline std::vector<Assignment> adapt_polar_words(const WordSet& positive_seed, const WordSet& negative_seed,
                                                 const ProfileMap& profiles, const AfinnLexicon& afinn) {
  std::vector<Assignment> out;
  for (const auto& w : positive_seed)
    out.push_back(adapt_polar_word(detail::profile_for(profiles, w), Sentiment::kPositive, afinn));
  for (const auto& w : negative_seed)
    out.push_back(adapt_polar_word(detail::profile_for(profiles, w), Sentiment::kNegative, afinn));
  return out;
}

struct AdaptedLexicon {
  WordSet positive;  // P_l
  WordSet negative;  // N_l
  WordSet neutral;
  std::map<std::string, Assignment> assignments;
};

// Partitions the assignments. When `seed` is given, the assignments must
// cover P_M, N_M and O_M exactly once.
inline AdaptedLexicon build_adapted_lexicon(const std::vector<Assignment>& assignments,
                                            const SeedPartition* seed = nullptr) {
  AdaptedLexicon lex;
  for (const auto& a : assignments) {
    if (!lex.assignments.emplace(a.word, a).second)
      throw ContractError("duplicate assignment for '" + a.word + "'");
    switch (a.assigned) {
      case Sentiment::kPositive: lex.positive.insert(a.word); break;
      case Sentiment::kNegative: lex.negative.insert(a.word); break;
      case Sentiment::kNeutral: lex.neutral.insert(a.word); break;
    }
  }
  if (seed) {
    for (const auto* set : {&seed->positive, &seed->negative, &seed->neutral})
      for (const auto& w : *set)
        if (!lex.assignments.contains(w)) throw ContractError("no assignment for seed word '" + w + "'");
    if (lex.assignments.size() != seed->size())
      throw ContractError("assignments contain words outside the seed vocabulary");
  }
  return lex;
}

// Runs both algorithms and combines them.
inline AdaptedLexicon adapt_lexicon(const SeedPartition& seed, const ProfileMap& profiles,
                                    const AfinnLexicon& afinn, const AdaptationOptions& opts = {}) {
  auto neutral = adapt_neutral_words(seed.neutral, profiles, afinn, opts);
  auto polar = adapt_polar_words(seed.positive, seed.negative, profiles, afinn);
  auto all = std::move(neutral.assignments);
  all.insert(all.end(), polar.begin(), polar.end());
  return build_adapted_lexicon(all, &seed);
}

inline DeviationSets deviation_sets(const AdaptedLexicon& lex, const SeedPartition& seed) {
  DeviationSets d;
  for (const auto& w : seed.neutral) {
    auto it = lex.assignments.find(w);
    if (it == lex.assignments.end()) continue;
    if (it->second.assigned == Sentiment::kNegative) d.negative.insert(w);
    if (it->second.assigned == Sentiment::kPositive) d.positive.insert(w);
  }
  return d;
}

// "<word>\t<sentiment>\t<rule_id>", sorted by word.
inline std::string format_adapted_lexicon(const AdaptedLexicon& lex) {
  std::string out;
  for (const auto& [w, a] : lex.assignments)
    out += w + '\t' + std::string(to_string(a.assigned)) + '\t' + std::string(to_string(a.rule)) + '\n';
  return out;
}

// Reads the adapted lexicon back. The source sentiment is recovered from
// the seed partition.
inline AdaptedLexicon parse_adapted_lexicon(std::string_view contents, const SeedPartition& seed,
                                            const std::string& source = "<adapted-lexicon>") {
  text::validate_utf8(contents);
  std::vector<Assignment> as;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() != 3) throw ParseError(source, i + 1, "expected '<word>\\t<sentiment>\\t<rule_id>'");
    auto s = parse_sentiment(c[1]);
    auto r = parse_rule_id(c[2]);
    if (!s) throw ParseError(source, i + 1, "unknown sentiment '" + std::string(c[1]) + "'");
    if (!r) throw ParseError(source, i + 1, "unknown rule id '" + std::string(c[2]) + "'");
    std::string w(c[0]);
    auto src = seed.sentiment_of(w);
    if (!src) throw ParseError(source, i + 1, "word '" + w + "' is not in the seed vocabulary");
    as.push_back({w, *src, *s, *r});
  }
  try {
    return build_adapted_lexicon(as, &seed);
  } catch (const ContractError& e) {
    throw ParseError(source, 0, e.what());
  }
}

// ---------------------------------------------------------------------------
// Expert annotation round trip.

struct WorklistEntry {
  std::string word;
  std::optional<Sentiment> current;  // algorithm's assignment, when known
  std::string context;               // optional example sentence
};

struct AnnotationWorklist {
  std::vector<WorklistEntry> entries;  // alphabetical, deduplicated

  std::vector<std::string> words() const {
    std::vector<std::string> w;
    for (const auto& e : entries) w.push_back(e.word);
    return w;
  }
  std::size_t size() const { return entries.size(); }
};

// W = D_op ∪ D_on ∪ P_M ∪ N_M.
inline AnnotationWorklist export_worklist(const DeviationSets& deviations, const WordSet& positive_seed,
                                          const WordSet& negative_seed, const AdaptedLexicon* lexicon = nullptr,
                                          const std::map<std::string, std::string>* contexts = nullptr) {
  WordSet all;
  for (const auto* s : {&deviations.positive, &deviations.negative, &positive_seed, &negative_seed})
    all.insert(s->begin(), s->end());
  AnnotationWorklist wl;
  for (const auto& w : all) {
    WorklistEntry e{w, std::nullopt, {}};
    if (lexicon)
      if (auto it = lexicon->assignments.find(w); it != lexicon->assignments.end()) e.current = it->second.assigned;
    if (contexts)
      if (auto it = contexts->find(w); it != contexts->end()) e.context = it->second;
    wl.entries.push_back(std::move(e));
  }
  return wl;
}

// "<word>\t<current_assignment>\t<label-to-fill>[\t<context>]".
inline std::string format_worklist(const AnnotationWorklist& wl) {
  std::string out;
  for (const auto& e : wl.entries) {
    out += e.word + '\t' + (e.current ? std::string(to_string(*e.current)) : "-") + '\t';
    if (!e.context.empty()) out += '\t' + e.context;
    out += '\n';
  }
  return out;
}

inline AnnotationWorklist parse_worklist(std::string_view contents, const std::string& source = "<worklist>") {
  text::validate_utf8(contents);
  AnnotationWorklist wl;
  std::set<std::string> seen;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() < 3 || c.size() > 4) throw ParseError(source, i + 1, "expected 3 or 4 columns");
    WorklistEntry e{std::string(c[0]), parse_sentiment(c[1]), c.size() == 4 ? std::string(c[3]) : ""};
    if (!seen.insert(e.word).second) throw ParseError(source, i + 1, "duplicate word '" + e.word + "'");
    wl.entries.push_back(std::move(e));
  }
  return wl;
}

struct AnnotatedSets {
  WordSet positive;  // P_a
  WordSet neutral;   // O_a
  WordSet negative;  // N_a
};

// Reads the completed worklist (third column filled with a sentiment).
inline AnnotatedSets ingest_annotations(const AnnotationWorklist& worklist, std::string_view contents,
                                        const std::string& source = "<annotations>") {
  text::validate_utf8(contents);
  std::set<std::string> expected;
  for (const auto& e : worklist.entries) expected.insert(e.word);
  AnnotatedSets out;
  std::set<std::string> seen;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() < 3) throw ParseError(source, i + 1, "expected '<word>\\t<current>\\t<label>'");
    std::string w(c[0]);
    if (!expected.contains(w)) throw ContractError("annotated word '" + w + "' is not in the worklist");
    if (!seen.insert(w).second) throw ContractError("duplicate annotation for '" + w + "'");
    auto label = parse_sentiment(text::trim(c[2]));
    if (!label) throw ParseError(source, i + 1, "unknown or missing label for '" + w + "'");
    switch (*label) {
      case Sentiment::kPositive: out.positive.insert(w); break;
      case Sentiment::kNeutral: out.neutral.insert(w); break;
      case Sentiment::kNegative: out.negative.insert(w); break;
    }
  }
  for (const auto& w : expected)
    if (!seen.contains(w)) throw ContractError("worklist word '" + w + "' has no annotation");
  return out;
}

struct DeviationDeltas {
  WordSet negative;  // D_n
  WordSet neutral;   // D_o
  WordSet positive;  // D_p
};

inline DeviationDeltas compute_deviation_deltas(const AnnotatedSets& annotated, const SeedPartition& seed,
                                                const std::vector<std::string>& worklist) {
  DeviationDeltas d;
  for (const auto& w : worklist) {
    if (annotated.negative.contains(w) && !seed.negative.contains(w)) d.negative.insert(w);
    if (annotated.positive.contains(w) && !seed.positive.contains(w)) d.positive.insert(w);
    if (annotated.neutral.contains(w) && !seed.neutral.contains(w)) d.neutral.insert(w);
  }
  return d;
}

// Deviated word -> expert legal sentiment, over D_n ∪ D_o ∪ D_p.
inline std::map<std::string, Sentiment> deviated_sentiments(const DeviationDeltas& d) {
  std::map<std::string, Sentiment> m;
  for (const auto& w : d.negative) m[w] = Sentiment::kNegative;
  for (const auto& w : d.neutral) m[w] = Sentiment::kNeutral;
  for (const auto& w : d.positive) m[w] = Sentiment::kPositive;
  return m;
}

// "<word>\t<D_n|D_o|D_p>\t<legal sentiment>", sorted by word.
inline std::string format_deltas(const DeviationDeltas& d) {
  std::map<std::string, std::pair<std::string_view, Sentiment>> rows;
  for (const auto& w : d.negative) rows[w] = {"D_n", Sentiment::kNegative};
  for (const auto& w : d.neutral) rows[w] = {"D_o", Sentiment::kNeutral};
  for (const auto& w : d.positive) rows[w] = {"D_p", Sentiment::kPositive};
  std::string out;
  for (const auto& [w, r] : rows)
    out += w + '\t' + std::string(r.first) + '\t' + std::string(to_string(r.second)) + '\n';
  return out;
}

inline DeviationDeltas parse_deltas(std::string_view contents, const std::string& source = "<deltas>") {
  text::validate_utf8(contents);
  DeviationDeltas d;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() != 3) throw ParseError(source, i + 1, "expected '<word>\\t<set>\\t<sentiment>'");
    std::string w(c[0]);
    if (c[1] == "D_n") d.negative.insert(w);
    else if (c[1] == "D_o") d.neutral.insert(w);
    else if (c[1] == "D_p") d.positive.insert(w);
    else throw ParseError(source, i + 1, "unknown set '" + std::string(c[1]) + "'");
  }
  return d;
}

}  // namespace lexadapt

#endif  // LEXADAPT_SENTIMENT_ADAPTATION_HPP_
