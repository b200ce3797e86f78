#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <map>
#include <random>

#include "lexadapt/embedding_store.hpp"
#include "oracles.hpp"

using namespace lexadapt;

namespace {

EmbeddingSpace space_of(const std::map<std::string, std::vector<double>>& vecs, DomainTag tag = DomainTag::kTarget) {
  EmbeddingSpace s(tag, vecs.begin()->second.size());
  for (const auto& [w, v] : vecs) s.add(w, v);
  return s;
}

}  // namespace

TEST(LoadEmbeddings, ParsesTextFormat) {
  auto s = parse_text_embeddings("2 2\na 1 0\nb 0 1\n", DomainTag::kTarget);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.dimension(), 2u);
  auto one = parse_text_embeddings("1 3\na 1 0 0", DomainTag::kSource);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.dimension(), 3u);
  EXPECT_EQ(one.domain_tag(), DomainTag::kSource);
}

TEST(LoadEmbeddings, RowLengthMismatchNamesLine) {
  try {
    parse_text_embeddings("2 2\na 1 0\nb 0", DomainTag::kTarget, "f.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.code(), ExitCode::kParse);
  }
}

TEST(LoadEmbeddings, MalformedInputs) {
  EXPECT_THROW(parse_text_embeddings("", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("two 2\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("1 0\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("1 2\na 1 nan\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("1 2\na 1 inf\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("1 2\na 1 x\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("2 2\na 1 0\na 0 1\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("3 2\na 1 0\nb 0 1\n", DomainTag::kTarget), ParseError);
  EXPECT_THROW(parse_text_embeddings("1 2\na 0 0\n", DomainTag::kTarget), ParseError);  // nothing usable
}

TEST(LoadEmbeddings, ZeroVectorsAreSkippedAndRecorded) {
  auto s = parse_text_embeddings("3 2\na 1 0\nz 0 0\nb 0 1\n", DomainTag::kBridge);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.skipped(), (std::vector<std::string>{"z"}));
  EXPECT_FALSE(s.contains("z"));
  EXPECT_THROW(s.cosine("a", "z"), DegenerateVectorError);
}

TEST(LoadEmbeddings, BinaryFormat) {
  std::string data = "2 2\n";
  auto row = [&](const std::string& w, float x, float y) {
    data += w + ' ';
    for (float f : {x, y}) {
      unsigned char b[4];
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
      data.append(reinterpret_cast<char*>(b), 4);
    }
    data += '\n';
  };
  row("a", 1.0f, 0.0f);
  row("b", 0.5f, 0.5f);
  auto s = parse_binary_embeddings(data, DomainTag::kTarget);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.cosine("a", "b"), 0.70710678118654752, 1e-9);
  EXPECT_THROW(parse_binary_embeddings(data.substr(0, data.size() - 3), DomainTag::kTarget), ParseError);
}

TEST(Cosine, WorkedExamples) {
  auto s = space_of({{"a", {1, 0}}, {"b", {1, 0}}, {"c", {0, 1}}, {"d", {1, 1}}});
  EXPECT_DOUBLE_EQ(s.cosine("a", "b"), 1.0);
  EXPECT_DOUBLE_EQ(s.cosine("a", "c"), 0.0);
  EXPECT_NEAR(s.cosine("d", "a"), std::sqrt(0.5), 1e-9);
}

TEST(Cosine, OovNamesWordAndDomain) {
  auto s = space_of({{"a", {1, 0}}}, DomainTag::kSource);
  try {
    s.cosine("a", "missing");
    FAIL();
  } catch (const OovError& e) {
    EXPECT_EQ(e.word(), "missing");
    EXPECT_NE(std::string(e.what()).find("source"), std::string::npos);
  }
}

TEST(MostSimilar, WorkedExamples) {
  auto s = space_of({{"a", {1, 0}}, {"b", {0.9, 0.1}}, {"c", {0, 1}}});
  EXPECT_EQ(s.most_similar("a"), "b");
  auto two = space_of({{"a", {1, 0}}, {"b", {1, 0}}});
  EXPECT_EQ(two.most_similar("a"), "b");
  EXPECT_THROW(s.most_similar("zzz"), OovError);
}

TEST(MostSimilar, TiesBreakLexicographically) {
  auto s = space_of({{"q", {1, 0}}, {"c", {0, 2}}, {"b", {0, 1}}, {"d", {0, 1}}});
  EXPECT_EQ(s.most_similar("c"), "b");
}

TEST(MostSimilar, RestrictedCandidates) {
  auto s = space_of({{"a", {1, 0}}, {"b", {0.9, 0.1}}, {"c", {0.5, 0.5}}});
  std::unordered_set<std::string> only_c{"c"};
  EXPECT_EQ(s.most_similar("a", &only_c), "c");
  std::unordered_set<std::string> none;
  EXPECT_EQ(s.most_similar("a", &none), std::nullopt);
}

TEST(MostSimilar, SingleWordSpaceHasNoNeighbour) {
  auto s = space_of({{"a", {1, 0}}});
  EXPECT_EQ(s.most_similar("a"), std::nullopt);
  auto degenerate = parse_text_embeddings("2 2\na 1 0\nz 0 0\n", DomainTag::kTarget);
  EXPECT_THROW(degenerate.most_similar("a"), DegenerateVectorError);
}

TEST(EmbeddingProperties, RandomSpaces) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 2 + rng() % 15;
    const std::size_t n = 2 + rng() % 60;
    std::map<std::string, std::vector<double>> raw;
    while (raw.size() < n) {
      std::vector<double> v(dim);
      for (auto& x : v) x = normal(rng);
      raw["w" + std::to_string(rng() % 100000)] = v;
    }
    auto s = space_of(raw);
    for (const auto& [w, v] : raw) {
      EXPECT_NEAR(s.cosine(w, w), 1.0, 1e-9);
      auto got = s.most_similar(w);
      ASSERT_TRUE(got);
      EXPECT_NE(*got, w);
      EXPECT_EQ(*got, oracle::most_similar(raw, w));
    }
    for (const auto& [u, _] : raw)
      for (const auto& [v, __] : raw) EXPECT_EQ(s.cosine(u, v), s.cosine(v, u));
  }
}
