// Command-line front end: one subcommand per pipeline stage, plus "all".

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexadapt/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> assignments;
  std::string output_dir;
  std::string seed;
  std::string threshold;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("-c,--config", o.config_file, "key=value configuration file");
  sub->add_option("-s,--set", o.assignments, "override one key (key=value); repeatable");
  sub->add_option("-o,--output-dir", o.output_dir, "directory for outputs and manifests");
  sub->add_option("--seed", o.seed, "rng_seed override");
  sub->add_option("--threshold", o.threshold, "domain_similarity_threshold override");
}

// Precedence: flags > config file > defaults.
lexadapt::PipelineConfig build_config(const CommonOptions& o) {
  lexadapt::PipelineConfig cfg;
  if (!o.config_file.empty()) cfg = lexadapt::PipelineConfig::from_file(o.config_file);
  for (const auto& a : o.assignments) cfg.set_assignment(a);
  if (!o.output_dir.empty()) cfg.set("output_dir", o.output_dir);
  if (!o.seed.empty()) cfg.set("rng_seed", o.seed);
  if (!o.threshold.empty()) cfg.set("domain_similarity_threshold", o.threshold);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexadapt: cross-domain sentiment lexicon adaptation toolkit"};
  app.set_version_flag("--version", std::string(lexadapt::kVersion));
  app.require_subcommand(1);

  CommonOptions opts;
  std::string selected;
  for (const auto& c : lexadapt::commands()) {
    auto* sub = app.add_subcommand(std::string(c.name), std::string(c.summary));
    add_common(sub, opts);
    sub->callback([&selected, name = std::string(c.name)] { selected = name; });
  }
  std::vector<std::string> stages;
  auto* all = app.add_subcommand("all", "run several stages in order (default: every stage)");
  add_common(all, opts);
  all->add_option("--stages", stages, "stage names to run, in order")->delimiter(',');
  all->callback([&selected] { selected = "all"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(lexadapt::ExitCode::kConfig);
  }

  try {
    auto cfg = build_config(opts);
    if (selected != "all") return lexadapt::run_command_status(selected, cfg, std::cerr);
    std::vector<std::string_view> order;
    if (stages.empty()) order = lexadapt::default_stage_order();
    for (const auto& s : stages) order.push_back(s);
    for (auto stage : order) {
      std::cerr << "== " << stage << "\n";
      if (int rc = lexadapt::run_command_status(stage, cfg, std::cerr); rc != 0) return rc;
    }
    return 0;
  } catch (const lexadapt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  }
}
