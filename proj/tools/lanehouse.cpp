// Command-line workbench: preprocess a rental CSV, compare the classical
// regressors, run the (mock or live) LLM prediction sweeps, and merge the
// reports.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "lanehouse/commands.hpp"

using namespace lanehouse;

int main(int argc, char** argv) {
  CLI::App app{"Shanghai lane-house rent prediction workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string dataset, schema, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false, mock = false, live = false;
  std::vector<int> k_list;
  std::string template_id;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run config (flags override)");
    cmd->add_option("--dataset", dataset, "raw CSV path");
    cmd->add_option("--schema", schema, "feature schema JSON (default: bundled)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "global seed")->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* pre = app.add_subcommand("preprocess", "clean + encode the raw CSV");
  add_common(pre);
  CLI::App* cmp = app.add_subcommand("compare", "tune and compare the classical regressors");
  add_common(cmp);
  CLI::App* llm = app.add_subcommand("llm", "k-shot LLM prediction sweeps");
  add_common(llm);
  llm->add_flag("--mock", mock, "deterministic offline client (default)");
  llm->add_flag("--live", live, "chat-completions endpoint from config");
  llm->add_option("--k", k_list, "shot counts, comma separated (default 0,1,5,10)")->delimiter(',');
  llm->add_option("--template", template_id, "prompt template id");
  CLI::App* rep = app.add_subcommand("report", "merge comparison and LLM reports");
  add_common(rep);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
    if (config_path.empty()) cfg.models = RunConfig::default_model_slots();
    if (!dataset.empty()) cfg.dataset_path = dataset;
    if (!schema.empty()) cfg.schema_path = schema;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) {
      cfg.seed = seed;
      cfg.split.seed = seed;
    }
    if (mock) cfg.llm.mock_mode = true;
    if (live) cfg.llm.mock_mode = false;
    if (!k_list.empty()) cfg.k_list = k_list;
    if (!template_id.empty()) cfg.template_id = template_id;

    if (pre->parsed()) return cmd_preprocess(cfg);
    if (cmp->parsed()) return cmd_compare(cfg);
    if (llm->parsed()) return cmd_llm(cfg);
    if (rep->parsed()) return cmd_report(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
