#include <gtest/gtest.h>

#include <random>

#include "lexadapt/transfer_prep.hpp"

using namespace lexadapt;

namespace {

LabeledSentence sentence(Label label, std::vector<std::string> tokens) {
  return LabeledSentence{std::move(tokens), std::nullopt, label, Provenance::kSource};
}

LabeledDataset three(std::vector<LabeledSentence> s) { return LabeledDataset{std::move(s), ClassMode::kThree}; }

}  // namespace

TEST(Dataset, ParseAndFormat) {
  auto ds = parse_dataset("positive\tThe Hero won\nnegative\tbad\tsource\n", {ClassMode::kThree, false});
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.sentences[0].tokens, (std::vector<std::string>{"the", "hero", "won"}));
  EXPECT_EQ(format_dataset(ds), "positive\tthe hero won\nnegative\tbad\n");
  EXPECT_THROW(parse_dataset("very_positive\tx\n", {ClassMode::kThree, false}), ParseError);
  EXPECT_THROW(parse_dataset("positive\n", {ClassMode::kThree, false}), ParseError);
  EXPECT_THROW(parse_dataset("positive\tx\televsewhere\n", {ClassMode::kThree, false}), ParseError);
}

TEST(Dataset, TaggedTokensSplitAtLastUnderscore) {
  auto ds = parse_dataset("neutral\tSam_NNP is_VBZ re_do_VB\n", {ClassMode::kThree, true});
  const auto& s = ds.sentences[0];
  EXPECT_EQ(s.tokens, (std::vector<std::string>{"sam", "is", "re_do"}));
  EXPECT_EQ(*s.pos_tags, (std::vector<std::string>{"NNP", "VBZ", "VB"}));
  EXPECT_THROW(parse_dataset("neutral\tsam\n", {ClassMode::kThree, true}), ParseError);
}

TEST(MapLabels, FiveToThree) {
  LabeledDataset five{{sentence(Label::kVeryPositive, {"a"}), sentence(Label::kPositive, {"b"}),
                       sentence(Label::kNeutral, {"c"}), sentence(Label::kNegative, {"d"}),
                       sentence(Label::kVeryNegative, {"e"})},
                      ClassMode::kFive};
  auto out = map_labels_5to3(five);
  EXPECT_EQ(out.class_mode, ClassMode::kThree);
  ASSERT_EQ(out.size(), 5u);
  std::map<Label, int> counts;
  for (std::size_t i = 0; i < out.size(); ++i) {
    counts[out.sentences[i].label]++;
    EXPECT_EQ(out.sentences[i].tokens, five.sentences[i].tokens);
  }
  EXPECT_EQ(out.sentences[0].label, Label::kPositive);
  EXPECT_EQ(out.sentences[2].label, Label::kNeutral);
  EXPECT_EQ(counts, (std::map<Label, int>{{Label::kNegative, 2}, {Label::kNeutral, 1}, {Label::kPositive, 2}}));
  EXPECT_THROW(map_labels_5to3(out), ContractError);
}

TEST(Filter, ChargedLabeledPositiveRemoved) {
  auto ds = three({sentence(Label::kPositive, {"the", "hero", "was", "charged", "with", "energy"}),
                   sentence(Label::kNeutral, {"a", "plain", "sentence"})});
  auto r = filter_negative_transfer(ds, {{"charged", Sentiment::kNegative}});
  ASSERT_EQ(r.removals.size(), 1u);
  EXPECT_EQ(r.removals[0].index, 0u);
  EXPECT_EQ(r.removals[0].triggers, std::vector<std::string>{"charged"});
  ASSERT_EQ(r.dataset.size(), 1u);
  EXPECT_EQ(r.dataset.sentences[0].tokens[1], "plain");
}

TEST(Filter, AgreeingDeviatedWordKept) {
  auto ds = three({sentence(Label::kNegative, {"he", "was", "charged"})});
  EXPECT_TRUE(filter_negative_transfer(ds, {{"charged", Sentiment::kNegative}}).removals.empty());
  EXPECT_THROW(filter_negative_transfer(LabeledDataset{{}, ClassMode::kFive}, {}), ContractError);
}

TEST(Filter, RandomPlantedConflicts) {
  std::mt19937_64 rng(31);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int trial = 0; trial < 200; ++trial) {
    DeviatedMap dev;
    for (const auto& w : vocab)
      if (rng() % 3 == 0) dev[w] = static_cast<Sentiment>(rng() % 3);
    LabeledDataset ds;
    for (int i = 0; i < 40; ++i) {
      std::vector<std::string> toks;
      for (std::size_t k = 0, n = 1 + rng() % 6; k < n; ++k) toks.push_back(vocab[rng() % vocab.size()]);
      ds.sentences.push_back(sentence(to_label(static_cast<Sentiment>(rng() % 3)), toks));
    }
    std::size_t expected_removed = 0;
    for (const auto& s : ds.sentences) {
      bool conflict = false;
      for (const auto& t : s.tokens)
        if (dev.contains(t) && dev.at(t) != collapse(s.label)) conflict = true;
      expected_removed += conflict;
    }
    auto r = filter_negative_transfer(ds, dev);
    EXPECT_EQ(r.removals.size(), expected_removed);
    EXPECT_EQ(r.dataset.size() + r.removals.size(), ds.size());
    for (const auto& s : r.dataset.sentences)
      for (const auto& t : s.tokens)
        if (dev.contains(t)) {
          EXPECT_EQ(dev.at(t), collapse(s.label));
        }
  }
}

TEST(Sample, AbsentWordIsShortfall) {
  TokenizedCorpus c{{{"x", "y"}}};
  auto r = sample_sentences_for_words(c, {"z"}, 2, 1);
  EXPECT_TRUE(r.samples.empty());
  ASSERT_EQ(r.shortfalls.size(), 1u);
  EXPECT_EQ(r.shortfalls[0].word, "z");
  EXPECT_EQ(r.shortfalls[0].found, 0u);
}

TEST(Sample, ExactlyTwoMatchesForced) {
  TokenizedCorpus c{{{"w"}, {"q"}, {"w", "w"}, {"r"}}};
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    auto r = sample_sentences_for_words(c, {"w"}, 2, seed);
    EXPECT_EQ(r.samples, (std::vector<SampledSentence>{{"w", 0}, {"w", 2}}));
    EXPECT_TRUE(r.shortfalls.empty());
  }
  EXPECT_THROW(sample_sentences_for_words(c, {"w"}, 0, 0), ConfigError);
}

TEST(Sample, DeterministicAndOrderIndependent) {
  TokenizedCorpus c;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) c.sentences.push_back({"s" + std::to_string(rng() % 10), "t" + std::to_string(rng() % 7)});
  WordSet all{"s1", "s2", "t3", "t4"};
  auto a = sample_sentences_for_words(c, all, 2, 42);
  EXPECT_EQ(a.samples, sample_sentences_for_words(c, all, 2, 42).samples);
  EXPECT_EQ(a.samples.size(), 8u);
  auto solo = sample_sentences_for_words(c, {"t3"}, 2, 42);
  std::vector<SampledSentence> t3;
  for (const auto& s : a.samples)
    if (s.word == "t3") t3.push_back(s);
  EXPECT_EQ(solo.samples, t3);
  for (const auto& s : a.samples) {
    const auto& sent = c.sentences[s.sentence_index];
    EXPECT_NE(std::find(sent.begin(), sent.end(), s.word), sent.end());
  }
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 20 && !differs; ++seed)
    differs = sample_sentences_for_words(c, all, 2, seed).samples != a.samples;
  EXPECT_TRUE(differs);
}

TEST(Sample, RoughlyUniform) {
  TokenizedCorpus c;
  for (int i = 0; i < 5; ++i) c.sentences.push_back({"w"});
  std::vector<int> hits(5);
  for (std::uint64_t seed = 0; seed < 5000; ++seed)
    for (const auto& s : sample_sentences_for_words(c, {"w"}, 2, seed).samples) hits[s.sentence_index]++;
  for (int h : hits) EXPECT_NEAR(h, 2000, 200);
}

TEST(Merge, CountsAndProvenance) {
  auto d = three({sentence(Label::kPositive, {"a"}), sentence(Label::kNegative, {"b"}), sentence(Label::kNeutral, {"c"})});
  auto legal = three({sentence(Label::kNegative, {"x"}), sentence(Label::kPositive, {"y"})});
  auto l = merge_datasets(d, legal);
  EXPECT_EQ(l.size(), 5u);
  EXPECT_EQ(l.sentences[2].provenance, Provenance::kSource);
  EXPECT_EQ(l.sentences[3].provenance, Provenance::kTarget);
  EXPECT_EQ(merge_datasets(d, three({})).sentences, d.sentences);
  EXPECT_THROW(merge_datasets(d, LabeledDataset{{}, ClassMode::kFive}), ContractError);
  EXPECT_NE(format_dataset(l, true).find("x\ttarget\n"), std::string::npos);
}

TEST(Substitute, ChargedBecomesHated) {
  auto ds = parse_dataset("neutral\tsam_NNP is_VBZ charged_VBN for_IN a_DT crime_NN\n", {ClassMode::kThree, true});
  auto r = substitute_deviated_words(ds.sentences[0], {{"charged", Sentiment::kNegative}}, default_substitution_maps());
  EXPECT_EQ(r.sentence.tokens, (std::vector<std::string>{"sam", "is", "hated", "for", "a", "crime"}));
  EXPECT_EQ(r.sentence.pos_tags, ds.sentences[0].pos_tags);
  EXPECT_EQ(r.sentence.label, ds.sentences[0].label);
  EXPECT_EQ(r.replaced, std::vector<std::size_t>{2});
}

TEST(Substitute, PositiveVerbBecomesReward) {
  LabeledSentence s{{"they", "acquit"}, std::vector<std::string>{"PRP", "VB"}, Label::kNeutral, Provenance::kSource};
  auto r = substitute_deviated_words(s, {{"acquit", Sentiment::kPositive}}, default_substitution_maps());
  EXPECT_EQ(r.sentence.tokens[1], "reward");
}

TEST(Substitute, IdentityAndUnmapped) {
  LabeledSentence s{{"a", "b"}, std::vector<std::string>{"DT", "SYM"}, Label::kNeutral, Provenance::kSource};
  auto same = substitute_deviated_words(s, {}, default_substitution_maps());
  EXPECT_EQ(same.sentence, s);
  auto un = substitute_deviated_words(s, {{"b", Sentiment::kPositive}}, default_substitution_maps());
  EXPECT_EQ(un.sentence, s);
  ASSERT_EQ(un.unmapped.size(), 1u);
  EXPECT_EQ(un.unmapped[0].tag, "SYM");
}

TEST(Substitute, Errors) {
  LabeledSentence untagged{{"a"}, std::nullopt, Label::kNeutral, Provenance::kSource};
  EXPECT_THROW(substitute_deviated_words(untagged, {}, {}), ContractError);
  LabeledSentence s{{"a"}, std::vector<std::string>{"JJ"}, Label::kNeutral, Provenance::kSource};
  EXPECT_THROW(substitute_deviated_words(s, {{"a", Sentiment::kNeutral}}, {{Sentiment::kPositive, {}}}), ContractError);
}

TEST(Substitute, RandomSentencesKeepShape) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> tags{"JJ", "NN", "VB", "VBN", "RB", "DT", "IN", "SYM"};
  const auto maps = default_substitution_maps();
  DeviatedMap dev{{"w0", Sentiment::kNegative}, {"w1", Sentiment::kPositive}, {"w2", Sentiment::kNeutral}};
  for (int i = 0; i < 1000; ++i) {
    LabeledSentence s;
    s.pos_tags.emplace();
    for (std::size_t k = 0, n = rng() % 12; k < n; ++k) {
      s.tokens.push_back("w" + std::to_string(rng() % 6));
      s.pos_tags->push_back(tags[rng() % tags.size()]);
    }
    auto r = substitute_deviated_words(s, dev, maps);
    ASSERT_EQ(r.sentence.tokens.size(), s.tokens.size());
    ASSERT_EQ(r.sentence.pos_tags, s.pos_tags);
    for (std::size_t k = 0; k < s.tokens.size(); ++k) {
      if (!dev.contains(s.tokens[k])) {
        EXPECT_EQ(r.sentence.tokens[k], s.tokens[k]);
      }
    }
  }
}

TEST(SubstitutionMaps, ShippedPositiveMapIsVerbatim) {
  auto m = positive_substitution_map();
  EXPECT_EQ(m.size(), 14u);
  EXPECT_EQ(m.at("JJ"), "beautiful");
  EXPECT_EQ(m.at("VBG"), "pleasing");
  EXPECT_EQ(m.at("VBD"), "won");
  auto file = load_substitution_map(std::string(LEXADAPT_DATA_DIR) + "/substitution_positive.tsv");
  EXPECT_EQ(file, m);
  EXPECT_THROW(parse_substitution_map("JJ\ta\nJJ\tb\n"), ParseError);
}
