#ifndef LEXADAPT_DOMAIN_ANALYSIS_HPP_
#define LEXADAPT_DOMAIN_ANALYSIS_HPP_

#include <algorithm>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexadapt/embedding_store.hpp"
#include "lexadapt/error.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

// ---------------------------------------------------------------------------
// Threshold calibration on the verb-pair similarity dataset.

struct VerbPair {
  std::string verb1;
  std::string verb2;
  bool similar = false;
};

using VerbPairDataset = std::vector<VerbPair>;

inline VerbPairDataset parse_verb_pairs(std::string_view contents, const std::string& source = "<verb-pairs>") {
  text::validate_utf8(contents);
  VerbPairDataset out;
  std::set<std::pair<std::string, std::string>> seen;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto cols = text::split(lines[i], '\t');
    if (cols.size() != 3) throw ParseError(source, i + 1, "expected '<verb1>\\t<verb2>\\t<0|1>'");
    std::string a(text::trim(cols[0])), b(text::trim(cols[1]));
    auto flag = text::trim(cols[2]);
    if (a.empty() || b.empty()) throw ParseError(source, i + 1, "empty verb");
    if (flag != "0" && flag != "1") throw ParseError(source, i + 1, "label must be 0 or 1");
    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    if (!seen.insert(key).second) throw ParseError(source, i + 1, "duplicate pair " + a + "/" + b);
    out.push_back({std::move(a), std::move(b), flag == "1"});
  }
  return out;
}

inline VerbPairDataset load_verb_pairs(const std::filesystem::path& path) {
  return parse_verb_pairs(text::read_file(path), path.string());
}

struct PrecisionRow {
  double threshold = 0.0;
  std::size_t predicted_positive = 0;
  std::size_t true_positive = 0;
  double precision = 0.0;
  bool degenerate = false;  // no predicted positives; precision reported as 0
  bool qualifies = false;
};

struct CalibrationResult {
  double threshold = 0.0;
  std::vector<PrecisionRow> table;
  std::size_t evaluated_pairs = 0;
  std::vector<VerbPair> skipped_pairs;  // at least one verb out of vocabulary
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, std::vector<PrecisionRow> table)
      : Error(ExitCode::kCalibration, what), table_(std::move(table)) {}
  const std::vector<PrecisionRow>& table() const { return table_; }

 private:
  std::vector<PrecisionRow> table_;
};

inline std::vector<double> default_threshold_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  return g;
}

inline constexpr double kMinCalibrationPrecision = 0.5;

// Predicts "similar" iff the target-space cosine reaches t and returns the
// smallest grid value whose precision is at least 0.5.
inline CalibrationResult calibrate_threshold(const VerbPairDataset& verbs, const EmbeddingSpace& target,
                                             const std::vector<double>& grid = default_threshold_grid()) {
  if (verbs.empty()) throw ContractError("calibrate_threshold: verb-pair dataset is empty");
  if (grid.empty()) throw ConfigError("calibrate_threshold: empty threshold grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("threshold grid must be ascending");

  CalibrationResult result;
  std::vector<std::pair<double, bool>> scored;
  for (const auto& p : verbs) {
    if (!target.contains(p.verb1) || !target.contains(p.verb2)) {
      result.skipped_pairs.push_back(p);
      continue;
    }
    scored.emplace_back(target.cosine(p.verb1, p.verb2), p.similar);
  }
  result.evaluated_pairs = scored.size();

  std::optional<double> chosen;
  for (double t : grid) {
    PrecisionRow row;
    row.threshold = t;
    for (const auto& [cos, similar] : scored) {
      if (cos >= t) {
        ++row.predicted_positive;
        if (similar) ++row.true_positive;
      }
    }
    if (row.predicted_positive == 0) {
      row.degenerate = true;
    } else {
      row.precision = static_cast<double>(row.true_positive) / static_cast<double>(row.predicted_positive);
      row.qualifies = row.precision >= kMinCalibrationPrecision;
    }
    if (row.qualifies && !chosen) chosen = t;
    result.table.push_back(row);
  }
  if (!chosen)
    throw CalibrationError("no threshold in the grid reaches precision " +
                               text::format_score(kMinCalibrationPrecision),
                           result.table);
  result.threshold = *chosen;
  return result;
}

// ---------------------------------------------------------------------------
// Cross-domain scores.

struct NeighborScores {
  std::optional<std::string> l_w;  // most similar word in the target space
  std::optional<std::string> m_w;  // most similar word in the source space
  std::optional<double> domain_similarity;
};

namespace detail {
inline std::optional<std::string> safe_most_similar(const EmbeddingSpace& space, const std::string& w,
                                                    const std::unordered_set<std::string>* candidates) {
  if (!space.contains(w)) return std::nullopt;
  try {
    return space.most_similar(w, candidates);
  } catch (const DegenerateVectorError&) {
    return std::nullopt;
  }
}
}  // namespace detail

inline NeighborScores neighbor_scores(const EmbeddingSpace& target, const EmbeddingSpace& source,
                                      const std::string& w,
                                      const std::unordered_set<std::string>* candidates = nullptr) {
  NeighborScores s;
  s.l_w = detail::safe_most_similar(target, w, candidates);
  s.m_w = detail::safe_most_similar(source, w, candidates);
  if (s.l_w && s.m_w && target.contains(*s.m_w)) s.domain_similarity = target.cosine(*s.l_w, *s.m_w);
  return s;
}

// Cosine in the target space between the target-domain and source-domain
// nearest neighbours of w.
inline std::optional<double> domain_similarity(const EmbeddingSpace& target, const EmbeddingSpace& source,
                                               const std::string& w,
                                               const std::unordered_set<std::string>* candidates = nullptr) {
  return neighbor_scores(target, source, w, candidates).domain_similarity;
}

// Bridge-space preference for the target sense over the source sense.
inline std::optional<double> afinn_similarity(const EmbeddingSpace& bridge, const std::string& w,
                                              const std::string& l_w, const std::string& m_w) {
  if (!bridge.contains(w) || !bridge.contains(l_w) || !bridge.contains(m_w)) return std::nullopt;
  return bridge.cosine(w, l_w) - bridge.cosine(w, m_w);
}

// ---------------------------------------------------------------------------
// Word profiles.

struct WordProfile {
  std::string word;
  std::optional<std::string> l_w;
  std::optional<std::string> m_w;
  std::optional<double> domain_similarity;
  std::optional<double> afinn_similarity;
  bool domain_generic = false;
  bool domain_specific = true;
  bool under_represented = false;
  bool afinn_assignable = false;
  bool not_antonyms = false;
  // Domain-generic status of l(w), evaluated with the same threshold.
  bool l_w_domain_generic = false;
  std::optional<Sentiment> source_sentiment_of_l_w;

  bool operator==(const WordProfile&) const = default;
};

using ProfileMap = std::map<std::string, WordProfile>;

struct ProfileInputs {
  const EmbeddingSpace& target;
  const EmbeddingSpace& source;
  const EmbeddingSpace& bridge;
  const SeedPartition& seed;
  const AfinnLexicon& afinn;
  const AntonymList& antonyms;
  // Raw token counts over the source training sentences.
  const std::unordered_map<std::string, std::size_t>& source_frequency;
  double threshold = 0.2;
  std::size_t under_represented_max = 3;
  // Consulted for l(w) when l(w) is outside the seed vocabulary.
  const LabelMap* auxiliary_labels = nullptr;
  // Restricts nearest-neighbour queries to these words when non-null.
  const std::unordered_set<std::string>* neighbor_candidates = nullptr;
};

inline WordProfile profile_word(const std::string& w, const ProfileInputs& in) {
  if (!in.target.contains(w)) throw OovError(w, in.target.domain_name());
  WordProfile p;
  p.word = w;
  auto ns = neighbor_scores(in.target, in.source, w, in.neighbor_candidates);
  p.l_w = ns.l_w;
  p.m_w = ns.m_w;
  p.domain_similarity = ns.domain_similarity;
  p.domain_generic = p.domain_similarity && *p.domain_similarity >= in.threshold;
  p.domain_specific = !p.domain_generic;

  auto f = in.source_frequency.find(w);
  const std::size_t freq = f == in.source_frequency.end() ? 0 : f->second;
  p.under_represented = freq < in.under_represented_max;

  if (p.l_w && p.m_w) p.afinn_similarity = afinn_similarity(in.bridge, w, *p.l_w, *p.m_w);
  p.afinn_assignable = in.afinn.contains(w) && p.afinn_similarity && *p.afinn_similarity > 0.0;

  if (p.l_w) {
    p.not_antonyms = !are_antonyms(in.antonyms, w, *p.l_w);
    auto lds = domain_similarity(in.target, in.source, *p.l_w, in.neighbor_candidates);
    p.l_w_domain_generic = lds && *lds >= in.threshold;
    p.source_sentiment_of_l_w = in.seed.sentiment_of(*p.l_w);
    if (!p.source_sentiment_of_l_w && in.auxiliary_labels) {
      auto it = in.auxiliary_labels->find(*p.l_w);
      if (it != in.auxiliary_labels->end()) p.source_sentiment_of_l_w = collapse(it->second);
    }
  }
  return p;
}

// Profiles every word; output order equals input order for any thread count.
inline std::vector<WordProfile> profile_words(const std::vector<std::string>& words, const ProfileInputs& in,
                                              unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, words.size())));
  std::vector<WordProfile> out(words.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < words.size(); ++i) out[i] = profile_word(words[i], in);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < words.size(); i += threads) out[i] = profile_word(words[i], in);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Profile TSV. Absent values render as "-", booleans as 0/1.
inline constexpr std::string_view kProfileHeader =
    "word\tl_w\tm_w\tdomain_similarity\tafinn_similarity\tdomain_generic\tdomain_specific\t"
    "under_represented\tafinn_assignable\tnot_antonyms\tl_w_domain_generic\tsource_sentiment_of_l_w";

inline std::string format_profiles(const std::vector<WordProfile>& profiles) {
  auto opt_str = [](const std::optional<std::string>& s) { return s ? *s : std::string("-"); };
  auto opt_num = [](const std::optional<double>& d) { return d ? text::format_score(*d) : std::string("-"); };
  auto b = [](bool v) { return v ? "1" : "0"; };
  std::string out(kProfileHeader);
  out += '\n';
  for (const auto& p : profiles) {
    out += p.word + '\t' + opt_str(p.l_w) + '\t' + opt_str(p.m_w) + '\t' + opt_num(p.domain_similarity) + '\t' +
           opt_num(p.afinn_similarity) + '\t' + b(p.domain_generic) + '\t' + b(p.domain_specific) + '\t' +
           b(p.under_represented) + '\t' + b(p.afinn_assignable) + '\t' + b(p.not_antonyms) + '\t' +
           b(p.l_w_domain_generic) + '\t' +
           (p.source_sentiment_of_l_w ? std::string(to_string(*p.source_sentiment_of_l_w)) : "-") + '\n';
  }
  return out;
}

inline std::vector<WordProfile> parse_profiles(std::string_view contents, const std::string& source = "<profiles>") {
  text::validate_utf8(contents);
  auto lines = text::split_lines(contents);
  if (lines.empty() || lines[0] != kProfileHeader) throw ParseError(source, 1, "missing profile header");
  std::vector<WordProfile> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    if (lines[i].empty()) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() != 12) throw ParseError(source, ln, "expected 12 columns");
    auto opt_str = [](std::string_view s) { return s == "-" ? std::nullopt : std::optional<std::string>(s); };
    auto opt_num = [&](std::string_view s) -> std::optional<double> {
      if (s == "-") return std::nullopt;
      return detail::parse_component(s, source, ln);
    };
    auto flag = [&](std::string_view s) {
      if (s != "0" && s != "1") throw ParseError(source, ln, "flag must be 0 or 1");
      return s == "1";
    };
    WordProfile p;
    p.word = std::string(c[0]);
    p.l_w = opt_str(c[1]);
    p.m_w = opt_str(c[2]);
    p.domain_similarity = opt_num(c[3]);
    p.afinn_similarity = opt_num(c[4]);
    p.domain_generic = flag(c[5]);
    p.domain_specific = flag(c[6]);
    p.under_represented = flag(c[7]);
    p.afinn_assignable = flag(c[8]);
    p.not_antonyms = flag(c[9]);
    p.l_w_domain_generic = flag(c[10]);
    if (c[11] != "-") {
      p.source_sentiment_of_l_w = parse_sentiment(c[11]);
      if (!p.source_sentiment_of_l_w) throw ParseError(source, ln, "unknown sentiment");
    }
    if (p.domain_generic == p.domain_specific)
      throw ParseError(source, ln, "domain_generic and domain_specific must be complementary");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lexadapt

#endif  // LEXADAPT_DOMAIN_ANALYSIS_HPP_
