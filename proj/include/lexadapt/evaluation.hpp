#ifndef LEXADAPT_EVALUATION_HPP_
#define LEXADAPT_EVALUATION_HPP_

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexadapt/error.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

// Rows are gold classes, columns predicted classes, both in
// (negative, neutral, positive) order.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, 3>, 3> counts{};

  std::size_t& at(Sentiment gold, Sentiment pred) { return counts[index_of(gold)][index_of(pred)]; }
  std::size_t at(Sentiment gold, Sentiment pred) const { return counts[index_of(gold)][index_of(pred)]; }

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& row : counts)
      for (auto c : row) t += c;
    return t;
  }
  std::size_t row_sum(Sentiment gold) const {
    std::size_t t = 0;
    for (auto c : counts[index_of(gold)]) t += c;
    return t;
  }
  std::size_t column_sum(Sentiment pred) const {
    std::size_t t = 0;
    for (const auto& row : counts) t += row[index_of(pred)];
    return t;
  }
  std::size_t trace() const { return counts[0][0] + counts[1][1] + counts[2][2]; }
};

inline ConfusionMatrix confusion_matrix(const std::vector<Sentiment>& gold, const std::vector<Sentiment>& predicted) {
  if (gold.size() != predicted.size())
    throw ContractError("confusion_matrix: " + std::to_string(gold.size()) + " gold labels vs " +
                        std::to_string(predicted.size()) + " predictions");
  if (gold.empty()) throw ContractError("confusion_matrix: no items");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i) ++m.at(gold[i], predicted[i]);
  return m;
}

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  // Set when the corresponding denominator was zero and the value is a
  // reported 0 rather than a measurement.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f_degenerate = false;
};

struct ClassMetrics {
  std::array<ClassScores, 3> per_class{};
  double accuracy = 0.0;

  const ClassScores& operator[](Sentiment s) const { return per_class[index_of(s)]; }
};

inline ClassMetrics class_metrics(const ConfusionMatrix& m) {
  ClassMetrics out;
  for (Sentiment c : kAllSentiments) {
    ClassScores& s = out.per_class[index_of(c)];
    const double tp = static_cast<double>(m.at(c, c));
    const std::size_t col = m.column_sum(c), row = m.row_sum(c);
    if (col == 0) s.precision_degenerate = true;
    else s.precision = tp / static_cast<double>(col);
    if (row == 0) s.recall_degenerate = true;
    else s.recall = tp / static_cast<double>(row);
    if (s.precision + s.recall == 0.0) s.f_degenerate = true;
    else s.f_measure = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  const std::size_t total = m.total();
  if (total) out.accuracy = static_cast<double>(m.trace()) / static_cast<double>(total);
  return out;
}

// "<gold>\t<predicted>" rows.
inline std::pair<std::vector<Sentiment>, std::vector<Sentiment>> parse_predictions(
    std::string_view contents, const std::string& source = "<predictions>") {
  text::validate_utf8(contents);
  std::vector<Sentiment> gold, pred;
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank_or_comment(lines[i])) continue;
    auto c = text::split(lines[i], '\t');
    if (c.size() != 2) throw ParseError(source, i + 1, "expected '<gold>\\t<predicted>'");
    auto g = parse_sentiment(text::trim(c[0])), p = parse_sentiment(text::trim(c[1]));
    if (!g || !p) throw ParseError(source, i + 1, "unknown sentiment label");
    gold.push_back(*g);
    pred.push_back(*p);
  }
  return {std::move(gold), std::move(pred)};
}

inline std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Per-class P/R/F plus accuracy, one row per model.
inline std::string format_metrics_tsv(const std::vector<std::pair<std::string, ClassMetrics>>& rows) {
  std::string out = "model";
  for (Sentiment c : kAllSentiments)
    for (const char* k : {"P", "R", "F"}) out += '\t' + std::string(to_string(c)) + '_' + k;
  out += "\taccuracy\n";
  for (const auto& [name, m] : rows) {
    out += name;
    for (Sentiment c : kAllSentiments) {
      const auto& s = m[c];
      out += '\t' + text::format_score(s.precision) + '\t' + text::format_score(s.recall) + '\t' +
             text::format_score(s.f_measure);
    }
    out += '\t' + text::format_score(m.accuracy) + '\n';
  }
  return out;
}

inline std::string format_metrics_table(const std::vector<std::pair<std::string, ClassMetrics>>& rows) {
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  auto pad = [](std::string s, std::size_t n) {
    s.resize(std::max(n, s.size()), ' ');
    return s;
  };
  std::string out = pad("Model", w) + " | Negative          | Neutral           | Positive          | Accuracy\n";
  out += pad("", w) + " |  P     R     F    |  P     R     F    |  P     R     F    |\n";
  for (const auto& [name, m] : rows) {
    out += pad(name, w) + " |";
    for (Sentiment c : kAllSentiments) {
      const auto& s = m[c];
      out += ' ' + two_decimals(s.precision) + "  " + two_decimals(s.recall) + "  " + two_decimals(s.f_measure) + " |";
    }
    out += ' ' + two_decimals(m.accuracy) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word-list comparison against gold word sentiments.

struct LexiconComparisonRow {
  std::string name;
  std::array<std::size_t, 3> counts{};     // gold negative, neutral, positive
  std::array<double, 3> fractions{};       // counts / size, 0 for an empty list
  std::array<int, 3> percentages{};        // rounded half-up
  std::size_t size = 0;
};

using LexiconComparison = std::vector<LexiconComparisonRow>;

inline int round_half_up_percent(double fraction) {
  // The epsilon keeps exact halves (e.g. 0.125 * 100) from rounding down.
  const double scaled = fraction * 100.0;
  return static_cast<int>(scaled + 0.5 + 1e-9);
}

inline LexiconComparison compare_lexicons(const std::map<std::string, Sentiment>& gold,
                                          const std::vector<std::pair<std::string, WordSet>>& lists) {
  LexiconComparison out;
  for (const auto& [name, words] : lists) {
    LexiconComparisonRow row;
    row.name = name;
    row.size = words.size();
    for (const auto& w : words) {
      auto it = gold.find(w);
      if (it == gold.end()) throw ContractError("word '" + w + "' in list " + name + " has no gold label");
      ++row.counts[index_of(it->second)];
    }
    for (std::size_t c = 0; c < 3; ++c) {
      row.fractions[c] = row.size ? static_cast<double>(row.counts[c]) / static_cast<double>(row.size) : 0.0;
      row.percentages[c] = round_half_up_percent(row.fractions[c]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline std::map<std::string, Sentiment> gold_from_labels(const LabelMap& labels) {
  std::map<std::string, Sentiment> g;
  for (const auto& [w, l] : labels) g[w] = collapse(l);
  return g;
}

// Layout: one row per gold polarity plus Total; counts then percentages.
inline std::string format_lexicon_comparison_tsv(const LexiconComparison& cmp) {
  std::string out = "polarity";
  for (const auto& r : cmp) out += "\tcount_" + r.name;
  for (const auto& r : cmp) out += "\tpercent_" + r.name;
  for (const auto& r : cmp) out += "\tfraction_" + r.name;
  out += '\n';
  for (Sentiment c : kAllSentiments) {
    out += to_string(c);
    for (const auto& r : cmp) out += '\t' + std::to_string(r.counts[index_of(c)]);
    for (const auto& r : cmp) out += '\t' + std::to_string(r.percentages[index_of(c)]);
    for (const auto& r : cmp) out += '\t' + text::format_score(r.fractions[index_of(c)]);
    out += '\n';
  }
  out += "total";
  for (const auto& r : cmp) out += '\t' + std::to_string(r.size);
  for (const auto& r : cmp) out += std::string("\t") + (r.size ? "100" : "0");
  for (const auto& r : cmp) out += std::string("\t") + (r.size ? "1.000000" : "0.000000");
  out += '\n';
  return out;
}

inline std::string format_lexicon_comparison_table(const LexiconComparison& cmp) {
  auto cell = [](const std::string& s) {
    std::string c = s;
    c.resize(std::max<std::size_t>(8, c.size()), ' ');
    return c;
  };
  std::string out = cell("Polarity");
  for (const auto& r : cmp) out += " | " + cell(r.name);
  for (const auto& r : cmp) out += " | " + cell(r.name + " %");
  out += '\n';
  auto line = [&](const std::string& label, auto count_of, auto pct_of) {
    std::string l = cell(label);
    for (const auto& r : cmp) l += " | " + cell(count_of(r));
    for (const auto& r : cmp) l += " | " + cell(pct_of(r));
    return l + '\n';
  };
  for (Sentiment c : kAllSentiments) {
    std::string name(to_string(c));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    out += line(
        name, [&](const LexiconComparisonRow& r) { return std::to_string(r.counts[index_of(c)]); },
        [&](const LexiconComparisonRow& r) { return std::to_string(r.percentages[index_of(c)]) + "%"; });
  }
  out += line(
      "Total", [](const LexiconComparisonRow& r) { return std::to_string(r.size); },
      [](const LexiconComparisonRow& r) { return std::string(r.size ? "100%" : "0%"); });
  return out;
}

}  // namespace lexadapt

#endif  // LEXADAPT_EVALUATION_HPP_
