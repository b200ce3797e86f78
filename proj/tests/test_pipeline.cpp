#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "lexadapt/pipeline.hpp"
#include "oracles.hpp"

using namespace lexadapt;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = LEXADAPT_FIXTURE_DIR;

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("lexadapt_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& contents) const {
    text::atomic_write(path_ / name, contents);
    return path_ / name;
  }

 private:
  fs::path path_;
};

PipelineConfig fixture_config(const fs::path& out) {
  auto cfg = PipelineConfig::from_file(kFixture / "pipeline.conf");
  cfg.set("output_dir", out.string());
  return cfg;
}

std::string slurp(const fs::path& p) { return text::read_file(p); }

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  PipelineConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.real("domain_similarity_threshold"), 0.2);
  EXPECT_EQ(cfg.integer("under_represented_max"), 3u);
  EXPECT_DOUBLE_EQ(cfg.real("coverage"), 0.95);
  EXPECT_EQ(cfg.precedence(), RulePrecedence::kAfinnFirst);
  cfg.merge_text("coverage = 0.9\n# comment\nrng_seed=7\n");
  EXPECT_DOUBLE_EQ(cfg.real("coverage"), 0.9);
  cfg.set_assignment("coverage=0.8");
  EXPECT_DOUBLE_EQ(cfg.real("coverage"), 0.8);
  EXPECT_EQ(cfg.integer("rng_seed"), 7u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, Errors) {
  PipelineConfig cfg;
  EXPECT_THROW(cfg.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(cfg.merge_text("coverage\n"), ConfigError);
  EXPECT_THROW(cfg.path("afinn"), ConfigError);
  cfg.set("coverage", "1.5");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.set("coverage", "0.95");
  cfg.set("rule_precedence", "random");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.set("rule_precedence", "neighbor_first");
  cfg.set("calibration_grid", "0.3,0.1");
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(PipelineConfig::from_file("/nonexistent/lexadapt.conf"), ConfigError);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
  auto cfg = PipelineConfig::from_file(kFixture / "pipeline.conf");
  EXPECT_EQ(cfg.path("afinn"), (kFixture / "afinn.tsv").lexically_normal());
  EXPECT_TRUE(fs::exists(cfg.path("target_embeddings")));
}

TEST(Commands, VocabOnSmallCorpusFollowsCutoff) {
  ScratchDir dir("vocab");
  PipelineConfig cfg;
  cfg.set("output_dir", dir.path().string());
  cfg.set("target_corpus", dir.write("c.txt", "the court ruled\nthe court held the motion\ncourt motion denied\n").string());
  cfg.set("stopwords", dir.write("s.txt", "the\n").string());
  std::ostringstream log;
  run_command("vocab", cfg, log);
  auto vocab = slurp(dir.path() / "vocabulary.tsv");
  // court 3, motion 2, denied/held/ruled 1: total 8, 0.95 * 8 = 7.6 -> k = 5.
  EXPECT_EQ(oracle::minimal_prefix({3, 2, 1, 1, 1}, 0.95), 5u);
  EXPECT_EQ(vocab, "# k=5 coverage=0.950000 covered=8 total=8\ncourt\t3\nmotion\t2\ndenied\t1\nheld\t1\nruled\t1\n");
  EXPECT_TRUE(fs::exists(dir.path() / "vocab.manifest.json"));
}

TEST(Commands, AdaptWithEmptySeedWritesEmptyFiles) {
  ScratchDir dir("empty");
  PipelineConfig cfg;
  cfg.set("output_dir", dir.path().string());
  dir.write("vocabulary.tsv", "# k=0\n");
  dir.write("profiles.tsv", std::string(kProfileHeader) + "\n");
  cfg.set("source_labels", dir.write("labels.tsv", "").string());
  cfg.set("afinn", dir.write("afinn.tsv", "").string());
  std::ostringstream log;
  EXPECT_EQ(run_command_status("adapt", cfg, log), 0) << log.str();
  EXPECT_EQ(slurp(dir.path() / "adapted_lexicon.tsv"), "");
  EXPECT_EQ(slurp(dir.path() / "deviation_sets.tsv"), "");
}

TEST(Commands, EvalOnNineItemFixture) {
  ScratchDir dir("eval");
  PipelineConfig cfg;
  cfg.set("output_dir", dir.path().string());
  cfg.set("predictions", (kFixture / "predictions.tsv").string());
  std::ostringstream log;
  run_command("eval", cfg, log);
  auto tsv = slurp(dir.path() / "metrics.tsv");
  EXPECT_NE(tsv.find("\t0.777778\n"), std::string::npos) << tsv;
  EXPECT_NE(slurp(dir.path() / "metrics.txt").find("0.78"), std::string::npos);
}

TEST(Commands, ExitCodes) {
  ScratchDir dir("codes");
  std::ostringstream log;
  PipelineConfig cfg;
  cfg.set("output_dir", dir.path().string());
  EXPECT_EQ(run_command_status("vocab", cfg, log), 2);  // no corpus configured
  EXPECT_EQ(run_command_status("nonsense", cfg, log), 2);

  cfg.set("target_embeddings", dir.write("bad.txt", "2 2\na 1 0\nb 0\n").string());
  cfg.set("verb_pairs", dir.write("pairs.tsv", "a\tb\t0\n").string());
  EXPECT_EQ(run_command_status("calibrate", cfg, log), 3);

  cfg.set("target_embeddings", dir.write("good.txt", "2 2\na 1 0\nb 1 0.1\n").string());
  EXPECT_EQ(run_command_status("calibrate", cfg, log), 4);
  EXPECT_NE(log.str().find("t=0.100000"), std::string::npos);

  dir.write("vocabulary.tsv", "a\t3\nb\t2\n");
  cfg.set("source_labels", dir.write("labels.tsv", "a\tpositive\n").string());
  cfg.set("afinn", dir.write("afinn.tsv", "").string());
  dir.write("profiles.tsv", std::string(kProfileHeader) + "\n");
  EXPECT_EQ(run_command_status("adapt", cfg, log), 5);
}

TEST(Commands, FailedCommandWritesNothing) {
  ScratchDir dir("atomic");
  PipelineConfig cfg;
  cfg.set("output_dir", dir.path().string());
  cfg.set("target_corpus", dir.write("c.txt", "ok\nbad \xff\n").string());
  cfg.set("stopwords", dir.write("s.txt", "").string());
  std::ostringstream log;
  EXPECT_EQ(run_command_status("vocab", cfg, log), 3);
  EXPECT_EQ(listing(dir.path()), (std::vector<std::string>{"c.txt", "s.txt"}));
}

TEST(Pipeline, FixtureRunIsByteIdentical) {
  ScratchDir a("run_a"), b("run_b");
  std::ostringstream log;
  auto cfg_a = fixture_config(a.path());
  auto cfg_b = fixture_config(b.path());
  cfg_b.set("threads", "3");
  cfg_a.set("threads", "1");
  run_pipeline(default_stage_order(), cfg_a, log);
  run_pipeline(default_stage_order(), cfg_b, log);
  auto names = listing(a.path());
  EXPECT_EQ(names, listing(b.path()));
  for (const auto& n : names) {
    if (n.ends_with(".manifest.json")) continue;  // records the thread count
    EXPECT_EQ(slurp(a.path() / n), slurp(b.path() / n)) << n;
  }
  for (const auto& n : names) EXPECT_FALSE(n.ends_with(".tmp")) << n;
}

TEST(Pipeline, FixtureOutputsMatchHandChecks) {
  ScratchDir dir("checks");
  std::ostringstream log;
  run_pipeline(default_stage_order(), fixture_config(dir.path()), log);
  EXPECT_NE(slurp(dir.path() / "vocabulary.tsv").find("# k=50 "), std::string::npos);
  EXPECT_NE(slurp(dir.path() / "removals.tsv").find("positive\tcharged\tthe hero was charged with energy .\n"),
            std::string::npos);
  EXPECT_NE(slurp(dir.path() / "substituted.tsv").find("sam_NNP is_VBZ hated_VBN for_IN a_DT crime_NN"),
            std::string::npos);
  EXPECT_NE(slurp(dir.path() / "deltas.tsv").find("charged\tD_n\tnegative\n"), std::string::npos);
  auto merged = slurp(dir.path() / "merged.tsv");
  auto filtered = slurp(dir.path() / "filtered.tsv");
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  auto legal = slurp(kFixture / "legal_dataset.tsv");
  EXPECT_EQ(count(merged), count(filtered) + count(legal));
  EXPECT_NE(slurp(dir.path() / "lexicon_comparison.tsv").find("count_N_l"), std::string::npos);
}
