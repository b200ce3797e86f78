#ifndef LEXADAPT_PIPELINE_HPP_
#define LEXADAPT_PIPELINE_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexadapt/corpus_stats.hpp"
#include "lexadapt/domain_analysis.hpp"
#include "lexadapt/embedding_store.hpp"
#include "lexadapt/error.hpp"
#include "lexadapt/evaluation.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/sentiment_adaptation.hpp"
#include "lexadapt/text_io.hpp"
#include "lexadapt/transfer_prep.hpp"

namespace lexadapt {

inline constexpr std::string_view kVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Configuration: line-oriented key=value, overridable per key.

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  bool is_path;
};

// Every accepted key. Paths default to empty (unset).
inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"output_dir", "out", false},
      {"target_embeddings", "", true},
      {"source_embeddings", "", true},
      {"bridge_embeddings", "", true},
      {"embedding_format", "text", false},
      {"source_labels", "", true},
      {"source_label_mode", "five", false},
      {"auxiliary_source_labels", "", true},
      {"afinn", "", true},
      {"antonyms", "", true},
      {"stopwords", "", true},
      {"verb_pairs", "", true},
      {"target_corpus", "", true},
      {"source_corpus", "", true},
      {"source_dataset", "", true},
      {"legal_dataset", "", true},
      {"tagged_dataset", "", true},
      {"tagged_dataset_mode", "three", false},
      {"annotations", "", true},
      {"gold_lexicon", "", true},
      {"predictions", "", true},
      {"substitution_positive", "", true},
      {"substitution_negative", "", true},
      {"substitution_neutral", "", true},
      {"domain_similarity_threshold", "0.2", false},
      {"use_calibrated_threshold", "false", false},
      {"calibration_grid", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", false},
      {"under_represented_max", "3", false},
      {"coverage", "0.95", false},
      {"rng_seed", "0", false},
      {"rule_precedence", "afinn_first", false},
      {"restrict_neighbor_transfer", "false", false},
      {"restrict_neighbors_to_vocabulary", "false", false},
      {"sample_per_word", "2", false},
      {"threads", "0", false},
      {"model_name", "model", false},
  };
  return keys;
}

class PipelineConfig {
 public:
  PipelineConfig() {
    for (const auto& k : config_keys()) values_[std::string(k.name)] = std::string(k.default_value);
  }

  // Relative paths in a config file resolve against the file's directory.
  static PipelineConfig from_file(const std::filesystem::path& path) {
    PipelineConfig cfg;
    cfg.merge_text(text::read_file(path), path.parent_path(), path.string());
    return cfg;
  }

  void merge_text(std::string_view contents, const std::filesystem::path& base_dir = {},
                  const std::string& source = "<config>") {
    auto lines = text::split_lines(contents);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (text::is_blank_or_comment(lines[i])) continue;
      auto eq = lines[i].find('=');
      if (eq == std::string_view::npos) throw ConfigError(source + ":" + std::to_string(i + 1) + ": expected key=value");
      set(std::string(text::trim(lines[i].substr(0, eq))), std::string(text::trim(lines[i].substr(eq + 1))), base_dir);
    }
  }

  void set(const std::string& key, std::string value, const std::filesystem::path& base_dir = {}) {
    const ConfigKey* known = find_key(key);
    if (!known) throw ConfigError("unknown configuration key '" + key + "'");
    if ((known->is_path || key == "output_dir") && !value.empty() && !base_dir.empty() &&
        std::filesystem::path(value).is_relative())
      value = (base_dir / value).lexically_normal().string();
    values_[key] = std::move(value);
  }

  // "key=value" as given on the command line.
  void set_assignment(std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
    set(std::string(text::trim(assignment.substr(0, eq))), std::string(text::trim(assignment.substr(eq + 1))));
  }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
    return it->second;
  }

  bool has_path(const std::string& key) const { return !get(key).empty(); }

  std::filesystem::path path(const std::string& key) const {
    const auto& v = get(key);
    if (v.empty()) throw ConfigError("configuration key '" + key + "' is required for this command");
    return v;
  }

  std::filesystem::path output_dir() const { return get("output_dir"); }

  double real(const std::string& key) const {
    const auto& v = get(key);
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
      throw ConfigError("'" + key + "' must be a real number, got '" + v + "'");
    return out;
  }

  std::uint64_t integer(const std::string& key) const {
    const auto& v = get(key);
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      throw ConfigError("'" + key + "' must be a non-negative integer, got '" + v + "'");
    return out;
  }

  bool boolean(const std::string& key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("'" + key + "' must be true or false, got '" + v + "'");
  }

  std::vector<double> grid() const {
    std::vector<double> g;
    for (auto part : text::split(get("calibration_grid"), ',')) {
      auto t = text::trim(part);
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError("malformed calibration_grid");
      g.push_back(v);
    }
    return g;
  }

  // Range checks on every non-path value.
  void validate() const {
    const double t = real("domain_similarity_threshold");
    if (t < -1.0 || t > 1.0) throw ConfigError("domain_similarity_threshold must lie in [-1, 1]");
    const double c = real("coverage");
    if (!(c > 0.0 && c <= 1.0)) throw ConfigError("coverage must lie in (0, 1]");
    if (integer("under_represented_max") == 0) throw ConfigError("under_represented_max must be at least 1");
    if (integer("sample_per_word") == 0) throw ConfigError("sample_per_word must be at least 1");
    integer("rng_seed");
    integer("threads");
    boolean("use_calibrated_threshold");
    boolean("restrict_neighbor_transfer");
    boolean("restrict_neighbors_to_vocabulary");
    precedence();
    embedding_format();
    label_mode("source_label_mode");
    label_mode("tagged_dataset_mode");
    auto g = grid();
    if (g.empty() || !std::is_sorted(g.begin(), g.end())) throw ConfigError("calibration_grid must be ascending");
  }

  RulePrecedence precedence() const {
    const auto& v = get("rule_precedence");
    if (v == "afinn_first") return RulePrecedence::kAfinnFirst;
    if (v == "neighbor_first") return RulePrecedence::kNeighborFirst;
    throw ConfigError("rule_precedence must be afinn_first or neighbor_first");
  }

  EmbeddingFormat embedding_format() const {
    const auto& v = get("embedding_format");
    if (v == "text") return EmbeddingFormat::kText;
    if (v == "binary") return EmbeddingFormat::kBinary;
    throw ConfigError("embedding_format must be text or binary");
  }

  ClassMode label_mode(const std::string& key) const {
    const auto& v = get(key);
    if (v == "five") return ClassMode::kFive;
    if (v == "three") return ClassMode::kThree;
    throw ConfigError("'" + key + "' must be five or three");
  }

  // Canonical text of every key except output_dir (the output location is
  // not an input to any computation).
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_)
      if (k != "output_dir") out += k + '=' + v + '\n';
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static const ConfigKey* find_key(std::string_view name) {
    for (const auto& k : config_keys())
      if (k.name == name) return &k;
    return nullptr;
  }

  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Intermediate file names inside output_dir.

namespace files {
inline constexpr std::string_view kFrequency = "frequency.tsv";
inline constexpr std::string_view kVocabulary = "vocabulary.tsv";
inline constexpr std::string_view kCalibration = "calibration.tsv";
inline constexpr std::string_view kProfiles = "profiles.tsv";
inline constexpr std::string_view kAdaptedLexicon = "adapted_lexicon.tsv";
inline constexpr std::string_view kDeviationSets = "deviation_sets.tsv";
inline constexpr std::string_view kWorklist = "worklist.tsv";
inline constexpr std::string_view kAnnotated = "annotated.tsv";
inline constexpr std::string_view kDeltas = "deltas.tsv";
inline constexpr std::string_view kDataset3 = "dataset_3class.tsv";
inline constexpr std::string_view kFiltered = "filtered.tsv";
inline constexpr std::string_view kRemovals = "removals.tsv";
inline constexpr std::string_view kSamples = "samples.tsv";
inline constexpr std::string_view kShortfalls = "shortfalls.tsv";
inline constexpr std::string_view kMerged = "merged.tsv";
inline constexpr std::string_view kSubstituted = "substituted.tsv";
inline constexpr std::string_view kUnmapped = "unmapped.tsv";
inline constexpr std::string_view kMetricsTsv = "metrics.tsv";
inline constexpr std::string_view kMetricsTxt = "metrics.txt";
inline constexpr std::string_view kLexiconTsv = "lexicon_comparison.tsv";
inline constexpr std::string_view kLexiconTxt = "lexicon_comparison.txt";
}  // namespace files

// ---------------------------------------------------------------------------
// One command invocation: tracks inputs, stages outputs, then commits them
// together with a manifest.

class CommandRun {
 public:
  CommandRun(std::string command, const PipelineConfig& cfg, std::ostream& log)
      : command_(std::move(command)), cfg_(cfg), log_(log) {}

  const PipelineConfig& config() const { return cfg_; }
  std::ostream& log() { return log_; }

  // Reads an input named by a config key; fails with a config error when
  // the file is missing.
  std::string read_input(const std::string& key) { return read_path(cfg_.path(key), cfg_.get(key)); }

  // Reads an intermediate file produced by an earlier command.
  std::string read_stage(std::string_view name) {
    auto p = cfg_.output_dir() / name;
    if (!std::filesystem::exists(p))
      throw ConfigError("missing intermediate file " + p.string() + "; run the producing command first");
    return read_path(p, "@" + std::string(name));
  }

  void stage_output(std::string_view name, std::string contents) {
    outputs_.emplace_back(std::string(name), std::move(contents));
  }

  void commit() {
    const auto dir = cfg_.output_dir();
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& [name, contents] : outputs_) {
      text::atomic_write(dir / name, contents);
      outs.push_back({{"file", name}, {"bytes", contents.size()}, {"fnv1a64", text::hex64(text::fnv1a64(contents))}});
    }
    nlohmann::ordered_json cfg_json = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg_.values())
      if (k != "output_dir") cfg_json[k] = v;
    nlohmann::ordered_json ins = nlohmann::ordered_json::array();
    for (const auto& [label, info] : inputs_)
      ins.push_back({{"input", label}, {"bytes", info.first}, {"fnv1a64", info.second}});
    nlohmann::ordered_json manifest = {
        {"command", command_},
        {"tool", "lexadapt"},
        {"version", kVersion},
        {"rng_seed", cfg_.integer("rng_seed")},
        {"config_hash", text::hex64(text::fnv1a64(cfg_.canonical()))},
        {"config", cfg_json},
        {"inputs", ins},
        {"outputs", outs},
    };
    text::atomic_write(dir / (command_ + ".manifest.json"), manifest.dump(2) + "\n");
    for (const auto& [name, contents] : outputs_)
      log_ << "wrote " << (dir / name).string() << " (" << contents.size() << " bytes)\n";
  }

 private:
  std::string read_path(const std::filesystem::path& p, const std::string& label) {
    if (!std::filesystem::is_regular_file(p)) throw ConfigError("input file does not exist: " + p.string());
    auto contents = text::read_file(p);
    inputs_[label] = {contents.size(), text::hex64(text::fnv1a64(contents))};
    return contents;
  }

  std::string command_;
  const PipelineConfig& cfg_;
  std::ostream& log_;
  std::map<std::string, std::pair<std::size_t, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

// ---------------------------------------------------------------------------
// Shared loaders for the command bodies.

namespace pipeline_detail {

// "<word>\t<count>" rows, optional leading '#' metadata line.
inline std::vector<std::string> parse_vocabulary(std::string_view contents) {
  std::vector<std::string> words;
  for (auto line : text::split_lines(contents)) {
    if (text::is_blank_or_comment(line)) continue;
    words.emplace_back(text::split(line, '\t')[0]);
  }
  return words;
}

inline SeedPartition load_seed(CommandRun& run) {
  const auto& cfg = run.config();
  auto vocab = parse_vocabulary(run.read_stage(files::kVocabulary));
  auto labels = parse_sentiment_labels(run.read_input("source_labels"), cfg.label_mode("source_label_mode"),
                                       cfg.get("source_labels"));
  return partition_seed(labels, vocab);
}

inline EmbeddingSpace load_space(CommandRun& run, const std::string& key, DomainTag tag) {
  auto contents = run.read_input(key);
  const auto& name = run.config().get(key);
  auto space = run.config().embedding_format() == EmbeddingFormat::kText
                   ? parse_text_embeddings(contents, tag, name)
                   : parse_binary_embeddings(contents, tag, name);
  if (!space.skipped().empty())
    run.log() << "warning: skipped " << space.skipped().size() << " zero vector(s) in " << name << "\n";
  return space;
}

inline std::string format_frequency(const FrequencyTable& t) {
  std::string out;
  for (const auto& e : t.entries) out += e.word + '\t' + std::to_string(e.count) + '\n';
  return out;
}

inline std::string format_calibration(const CalibrationResult& r) {
  std::string out = "threshold\tpredicted_positive\ttrue_positive\tprecision\tqualifies\n";
  for (const auto& row : r.table)
    out += text::format_score(row.threshold) + '\t' + std::to_string(row.predicted_positive) + '\t' +
           std::to_string(row.true_positive) + '\t' + (row.degenerate ? "-" : text::format_score(row.precision)) +
           '\t' + (row.qualifies ? "1" : "0") + '\n';
  out += "# selected=" + text::format_score(r.threshold) + " evaluated=" + std::to_string(r.evaluated_pairs) +
         " skipped=" + std::to_string(r.skipped_pairs.size()) + '\n';
  return out;
}

inline std::string format_word_sentiments(const std::map<std::string, Sentiment>& m) {
  std::string out;
  for (const auto& [w, s] : m) out += w + '\t' + std::string(to_string(s)) + '\n';
  return out;
}

inline AnnotatedSets parse_annotated(std::string_view contents) {
  AnnotatedSets a;
  for (auto line : text::split_lines(contents)) {
    if (text::is_blank_or_comment(line)) continue;
    auto c = text::split(line, '\t');
    auto s = c.size() == 2 ? parse_sentiment(c[1]) : std::nullopt;
    if (!s) throw ParseError(std::string(files::kAnnotated), 0, "malformed row");
    std::string w(c[0]);
    if (*s == Sentiment::kPositive) a.positive.insert(w);
    else if (*s == Sentiment::kNegative) a.negative.insert(w);
    else a.neutral.insert(w);
  }
  return a;
}

}  // namespace pipeline_detail

// ---------------------------------------------------------------------------
// Commands.

inline void cmd_vocab(CommandRun& run) {
  const auto& cfg = run.config();
  auto corpus = tokenize_corpus(run.read_input("target_corpus"));
  auto stop = parse_stopwords(run.read_input("stopwords"));
  auto table = build_frequency_table(remove_stopwords(corpus, stop));
  auto sel = select_vocabulary(table, cfg.real("coverage"));
  std::string vocab = "# k=" + std::to_string(sel.k) + " coverage=" + text::format_score(sel.coverage) +
                      " covered=" + std::to_string(sel.covered_count) + " total=" + std::to_string(sel.total_count) +
                      '\n';
  for (std::size_t i = 0; i < sel.k; ++i)
    vocab += table.entries[i].word + '\t' + std::to_string(table.entries[i].count) + '\n';
  run.stage_output(files::kFrequency, pipeline_detail::format_frequency(table));
  run.stage_output(files::kVocabulary, vocab);
  run.log() << "vocabulary: k=" << sel.k << " of " << table.size() << " words\n";
}

inline void cmd_calibrate(CommandRun& run) {
  auto verbs = parse_verb_pairs(run.read_input("verb_pairs"), run.config().get("verb_pairs"));
  auto target = pipeline_detail::load_space(run, "target_embeddings", DomainTag::kTarget);
  auto result = calibrate_threshold(verbs, target, run.config().grid());
  run.stage_output(files::kCalibration, pipeline_detail::format_calibration(result));
  run.log() << "calibrated threshold: " << text::format_score(result.threshold) << "\n";
}

inline void cmd_profile(CommandRun& run) {
  const auto& cfg = run.config();
  auto vocab = pipeline_detail::parse_vocabulary(run.read_stage(files::kVocabulary));
  auto seed = pipeline_detail::load_seed(run);
  auto target = pipeline_detail::load_space(run, "target_embeddings", DomainTag::kTarget);
  auto source = pipeline_detail::load_space(run, "source_embeddings", DomainTag::kSource);
  auto bridge = pipeline_detail::load_space(run, "bridge_embeddings", DomainTag::kBridge);
  auto afinn = parse_afinn(run.read_input("afinn"), cfg.get("afinn"));
  auto antonyms = parse_antonyms(run.read_input("antonyms"), cfg.get("antonyms"));
  auto source_freq = count_words(tokenize_corpus(run.read_input("source_corpus")));
  std::optional<LabelMap> aux;
  if (cfg.has_path("auxiliary_source_labels"))
    aux = parse_sentiment_labels(run.read_input("auxiliary_source_labels"), cfg.label_mode("source_label_mode"),
                                 cfg.get("auxiliary_source_labels"));

  double threshold = cfg.real("domain_similarity_threshold");
  if (cfg.boolean("use_calibrated_threshold")) {
    auto verbs = parse_verb_pairs(run.read_input("verb_pairs"), cfg.get("verb_pairs"));
    threshold = calibrate_threshold(verbs, target, cfg.grid()).threshold;
  }
  std::unordered_set<std::string> candidates(vocab.begin(), vocab.end());
  ProfileInputs in{target, source, bridge, seed, afinn, antonyms, source_freq};
  in.threshold = threshold;
  in.under_represented_max = cfg.integer("under_represented_max");
  in.auxiliary_labels = aux ? &*aux : nullptr;
  in.neighbor_candidates = cfg.boolean("restrict_neighbors_to_vocabulary") ? &candidates : nullptr;

  std::vector<std::string> in_space;
  for (const auto& w : vocab) {
    if (target.contains(w)) in_space.push_back(w);
    else run.log() << "warning: '" << w << "' has no target-space vector; not profiled\n";
  }
  auto profiles = profile_words(in_space, in, static_cast<unsigned>(cfg.integer("threads")));
  run.stage_output(files::kProfiles, format_profiles(profiles));
  run.log() << "profiled " << profiles.size() << " words at threshold " << text::format_score(threshold) << "\n";
}

inline void cmd_adapt(CommandRun& run) {
  const auto& cfg = run.config();
  auto seed = pipeline_detail::load_seed(run);
  auto afinn = parse_afinn(run.read_input("afinn"), cfg.get("afinn"));
  ProfileMap profiles;
  for (auto& p : parse_profiles(run.read_stage(files::kProfiles), std::string(files::kProfiles)))
    profiles.emplace(p.word, std::move(p));
  AdaptationOptions opts;
  opts.precedence = cfg.precedence();
  opts.restrict_neighbor_transfer = cfg.boolean("restrict_neighbor_transfer");
  auto lex = adapt_lexicon(seed, profiles, afinn, opts);
  auto dev = deviation_sets(lex, seed);
  std::string devs;
  std::map<std::string, std::string_view> rows;
  for (const auto& w : dev.negative) rows[w] = "D_on";
  for (const auto& w : dev.positive) rows[w] = "D_op";
  for (const auto& [w, s] : rows) devs += w + '\t' + std::string(s) + '\n';
  run.stage_output(files::kAdaptedLexicon, format_adapted_lexicon(lex));
  run.stage_output(files::kDeviationSets, devs);
  run.log() << "adapted lexicon: P_l=" << lex.positive.size() << " N_l=" << lex.negative.size()
            << " D_op=" << dev.positive.size() << " D_on=" << dev.negative.size() << "\n";
}

inline void cmd_worklist(CommandRun& run) {
  auto seed = pipeline_detail::load_seed(run);
  auto lex = parse_adapted_lexicon(run.read_stage(files::kAdaptedLexicon), seed, std::string(files::kAdaptedLexicon));
  auto wl = export_worklist(deviation_sets(lex, seed), seed.positive, seed.negative, &lex);
  run.stage_output(files::kWorklist, format_worklist(wl));
  run.log() << "worklist: " << wl.size() << " words\n";
}

inline void cmd_ingest(CommandRun& run) {
  auto wl = parse_worklist(run.read_stage(files::kWorklist), std::string(files::kWorklist));
  auto a = ingest_annotations(wl, run.read_input("annotations"), run.config().get("annotations"));
  std::map<std::string, Sentiment> m;
  for (const auto& w : a.positive) m[w] = Sentiment::kPositive;
  for (const auto& w : a.neutral) m[w] = Sentiment::kNeutral;
  for (const auto& w : a.negative) m[w] = Sentiment::kNegative;
  run.stage_output(files::kAnnotated, pipeline_detail::format_word_sentiments(m));
  run.log() << "annotations: P_a=" << a.positive.size() << " O_a=" << a.neutral.size() << " N_a=" << a.negative.size()
            << "\n";
}

inline void cmd_deltas(CommandRun& run) {
  auto seed = pipeline_detail::load_seed(run);
  auto wl = parse_worklist(run.read_stage(files::kWorklist), std::string(files::kWorklist));
  auto a = pipeline_detail::parse_annotated(run.read_stage(files::kAnnotated));
  auto d = compute_deviation_deltas(a, seed, wl.words());
  run.stage_output(files::kDeltas, format_deltas(d));
  run.log() << "deltas: D_n=" << d.negative.size() << " D_o=" << d.neutral.size() << " D_p=" << d.positive.size()
            << "\n";
}

inline void cmd_map_labels(CommandRun& run) {
  auto ds = parse_dataset(run.read_input("source_dataset"), {ClassMode::kFive, false}, run.config().get("source_dataset"));
  auto mapped = map_labels_5to3(ds);
  run.stage_output(files::kDataset3, format_dataset(mapped));
  run.log() << "mapped " << mapped.size() << " sentences to three classes\n";
}

inline void cmd_filter(CommandRun& run) {
  auto ds = parse_dataset(run.read_stage(files::kDataset3), {ClassMode::kThree, false}, std::string(files::kDataset3));
  auto deviated = deviated_sentiments(parse_deltas(run.read_stage(files::kDeltas), std::string(files::kDeltas)));
  auto r = filter_negative_transfer(ds, deviated);
  run.stage_output(files::kFiltered, format_dataset(r.dataset));
  run.stage_output(files::kRemovals, format_removals(ds, r.removals));
  run.log() << "filter: " << ds.size() << " -> " << r.dataset.size() << " sentences\n";
}

inline void cmd_sample(CommandRun& run) {
  const auto& cfg = run.config();
  auto corpus = tokenize_corpus(run.read_input("target_corpus"));
  auto d = parse_deltas(run.read_stage(files::kDeltas), std::string(files::kDeltas));
  WordSet words = d.negative;
  words.insert(d.positive.begin(), d.positive.end());
  auto r = sample_sentences_for_words(corpus, words, cfg.integer("sample_per_word"), cfg.integer("rng_seed"));
  std::string shortfalls;
  for (const auto& s : r.shortfalls)
    shortfalls += s.word + '\t' + std::to_string(s.found) + '\t' + std::to_string(s.requested) + '\n';
  run.stage_output(files::kSamples, format_samples(corpus, r));
  run.stage_output(files::kShortfalls, shortfalls);
  run.log() << "sampled " << r.samples.size() << " sentences for " << words.size() << " words ("
            << r.shortfalls.size() << " shortfall(s))\n";
}

inline void cmd_merge(CommandRun& run) {
  auto d = parse_dataset(run.read_stage(files::kFiltered), {ClassMode::kThree, false}, std::string(files::kFiltered));
  auto legal = parse_dataset(run.read_input("legal_dataset"), {ClassMode::kThree, false}, run.config().get("legal_dataset"));
  auto merged = merge_datasets(d, legal);
  run.stage_output(files::kMerged, format_dataset(merged, true));
  run.log() << "merged: " << d.size() << " + " << legal.size() << " = " << merged.size() << "\n";
}

inline void cmd_substitute(CommandRun& run) {
  const auto& cfg = run.config();
  auto ds = parse_dataset(run.read_input("tagged_dataset"), {cfg.label_mode("tagged_dataset_mode"), true},
                          cfg.get("tagged_dataset"));
  auto deviated = deviated_sentiments(parse_deltas(run.read_stage(files::kDeltas), std::string(files::kDeltas)));
  auto maps = default_substitution_maps();
  const std::pair<const char*, Sentiment> overrides[] = {{"substitution_positive", Sentiment::kPositive},
                                                         {"substitution_negative", Sentiment::kNegative},
                                                         {"substitution_neutral", Sentiment::kNeutral}};
  for (const auto& [key, s] : overrides)
    if (cfg.has_path(key)) maps[s] = parse_substitution_map(run.read_input(key), cfg.get(key));
  LabeledDataset out;
  out.class_mode = ds.class_mode;
  std::string unmapped;
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < ds.sentences.size(); ++i) {
    auto r = substitute_deviated_words(ds.sentences[i], deviated, maps);
    replaced += r.replaced.size();
    for (const auto& u : r.unmapped)
      unmapped += std::to_string(i) + '\t' + std::to_string(u.position) + '\t' + u.word + '\t' + u.tag + '\n';
    out.sentences.push_back(std::move(r.sentence));
  }
  run.stage_output(files::kSubstituted, format_dataset(out));
  run.stage_output(files::kUnmapped, unmapped);
  run.log() << "substituted " << replaced << " token(s) in " << out.size() << " sentences\n";
}

inline void cmd_eval(CommandRun& run) {
  const auto& cfg = run.config();
  bool did_something = false;
  if (cfg.has_path("predictions")) {
    auto [gold, pred] = parse_predictions(run.read_input("predictions"), cfg.get("predictions"));
    auto m = class_metrics(confusion_matrix(gold, pred));
    std::vector<std::pair<std::string, ClassMetrics>> rows = {{cfg.get("model_name"), m}};
    run.stage_output(files::kMetricsTsv, format_metrics_tsv(rows));
    run.stage_output(files::kMetricsTxt, format_metrics_table(rows));
    run.log() << "accuracy " << text::format_score(m.accuracy) << "\n";
    did_something = true;
  }
  if (cfg.has_path("gold_lexicon")) {
    auto seed = pipeline_detail::load_seed(run);
    auto lex =
        parse_adapted_lexicon(run.read_stage(files::kAdaptedLexicon), seed, std::string(files::kAdaptedLexicon));
    auto gold = gold_from_labels(parse_sentiment_labels(run.read_input("gold_lexicon"), ClassMode::kThree,
                                                        cfg.get("gold_lexicon")));
    auto cmp = compare_lexicons(gold, {{"N_m", seed.negative}, {"N_l", lex.negative}, {"P_m", seed.positive},
                                       {"P_l", lex.positive}});
    run.stage_output(files::kLexiconTsv, format_lexicon_comparison_tsv(cmp));
    run.stage_output(files::kLexiconTxt, format_lexicon_comparison_table(cmp));
    did_something = true;
  }
  if (!did_something) throw ConfigError("eval needs 'predictions' and/or 'gold_lexicon'");
}

struct CommandSpec {
  std::string_view name;
  std::string_view summary;
  void (*body)(CommandRun&);
};

inline const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> list = {
      {"vocab", "frequency table and considered vocabulary S", cmd_vocab},
      {"calibrate", "domain-similarity threshold from verb pairs", cmd_calibrate},
      {"profile", "per-word cross-domain profiles", cmd_profile},
      {"adapt", "reassign seed sentiments (adapted lexicon, D_on/D_op)", cmd_adapt},
      {"worklist", "expert annotation worklist W", cmd_worklist},
      {"ingest", "read completed annotations", cmd_ingest},
      {"deltas", "deviation deltas D_n/D_o/D_p", cmd_deltas},
      {"map-labels", "five-class to three-class dataset labels", cmd_map_labels},
      {"filter", "remove sentences that conflict with deviated words", cmd_filter},
      {"sample", "sample target-domain sentences per deviated word", cmd_sample},
      {"merge", "merge filtered source data with annotated target data", cmd_merge},
      {"substitute", "PoS-preserving replacement of deviated words", cmd_substitute},
      {"eval", "classification metrics and word-list comparison", cmd_eval},
  };
  return list;
}

// Runs one command; throws lexadapt::Error subclasses on failure.
inline void run_command(std::string_view name, const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  for (const auto& c : commands()) {
    if (c.name != name) continue;
    CommandRun run(std::string(name), cfg, log);
    c.body(run);
    run.commit();
    return;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

inline std::vector<std::string_view> default_stage_order() {
  std::vector<std::string_view> order;
  for (const auto& c : commands()) order.push_back(c.name);
  return order;
}

// Runs the listed commands in order, stopping at the first failure.
inline void run_pipeline(const std::vector<std::string_view>& stages, const PipelineConfig& cfg, std::ostream& log) {
  for (auto stage : stages) {
    log << "== " << stage << "\n";
    run_command(stage, cfg, log);
  }
}

// Runs a command and converts failures into the documented exit codes.
inline int run_command_status(std::string_view name, const PipelineConfig& cfg, std::ostream& log) {
  try {
    run_command(name, cfg, log);
    return static_cast<int>(ExitCode::kSuccess);
  } catch (const CalibrationError& e) {
    log << "error: " << e.what() << "\n";
    for (const auto& r : e.table())
      log << "  t=" << text::format_score(r.threshold) << " precision="
          << (r.degenerate ? std::string("-") : text::format_score(r.precision)) << "\n";
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kConfig);
  }
}

}  // namespace lexadapt

#endif  // LEXADAPT_PIPELINE_HPP_
