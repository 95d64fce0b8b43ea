#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "melorig/errors.hpp"
#include "melorig/pipeline.hpp"

namespace {

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::string> method;
  std::optional<int> ngram_order;
  std::optional<int> top_k;
  bool strict = false;
  bool serial = false;
};

void apply(const CliOverrides& cli, melorig::PipelineConfig& cfg) {
  if (cli.out_dir) cfg.out_dir = *cli.out_dir;
  if (cli.threads) cfg.threads = *cli.threads;
  if (cli.method) cfg.method = *cli.method;
  if (cli.ngram_order) cfg.ngram_order = *cli.ngram_order;
  if (cli.top_k) cfg.top_k = *cli.top_k;
  if (cli.strict) cfg.strict = true;
  if (cli.serial) cfg.serial = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"melodic originality corpus analysis"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides cli;
  app.add_option("--config", config_path, "pipeline config file")
      ->type_name("PATH");
  app.add_flag("--strict", cli.strict, "piece-level failures fail the run");
  app.add_option("--out", cli.out_dir, "output directory override")->type_name("DIR");
  app.add_option("--threads", cli.threads, "worker thread count (0 = default)");
  app.add_flag("--serial", cli.serial, "use the serial reference kernels");
  app.add_option("--method", cli.method, "scoring method: all, simonton or ngram");
  app.add_option("--ngram-order", cli.ngram_order, "window length for method ngram");
  app.add_option("--top-k", cli.top_k, "ranked table length");

  struct Sub {
    const char* name;
    const char* help;
    unsigned stages;
  };
  const Sub subs[] = {
      {"scan", "index the corpus against the datasheet", melorig::kStageScan},
      {"matrix", "emit transition count and probability matrices",
       melorig::kStageMatrix},
      {"score", "score pieces and emit datasheet plus ranked table",
       melorig::kStageScore},
      {"popularity", "fetch popularity counts into the datasheet",
       melorig::kStagePopularity},
      {"stats", "run the regression and t-test battery", melorig::kStageStats},
      {"report", "emit the SVG figures", melorig::kStageReport},
      {"run", "everything end to end", melorig::kAllStages},
  };
  unsigned requested = 0;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    unsigned stages = sub.stages;
    cmd->callback([&requested, stages] { requested |= stages; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (config_path.empty()) {
    std::fprintf(stderr, "error: --config is required\n");
    return 2;
  }

  try {
    melorig::PipelineConfig cfg = melorig::PipelineConfig::load(config_path);
    apply(cli, cfg);
    return melorig::run_pipeline(cfg, requested, std::cout).exit_code;
  } catch (const melorig::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return err.code() == melorig::Errc::BadConfig ? 2 : 1;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
