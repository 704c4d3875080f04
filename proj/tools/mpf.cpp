#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpf/config.hpp"
#include "mpf/decisions_csv.hpp"
#include "mpf/errors.hpp"
#include "mpf/evaluation.hpp"
#include "mpf/ground_truth.hpp"
#include "mpf/pipeline.hpp"
#include "mpf/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mpf;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig load(const Common& c) {
  RunConfig cfg = load_run_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    if (cfg.world) cfg.world->seed = *c.seed;
  }
  return cfg;
}

std::vector<std::string> channel_names(const TemplateDatabase& db) {
  std::vector<std::string> names;
  for (const auto& ch : db.channels) names.push_back(ch.spec().name());
  return names;
}

std::string dir_name(std::string name) {
  for (auto& ch : name) {
    if (ch == ':' || ch == '/') ch = '_';
  }
  return name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int build_db(const Common& c) {
  RunConfig cfg = load(c);
  const fs::path out = c.out.empty() ? cfg.database_dir : fs::path(c.out);
  if (out.empty()) throw ConfigError("build-db: no output directory (pass --out or set 'database')");
  const auto db = build_database(cfg);
  save_database(db, out);
  std::cout << "database: " << db.size() << " templates, " << db.channels.size() << " channel(s) -> " << out.string()
            << '\n';
  return 0;
}

int localize(const Common& c, const std::string& db_dir) {
  RunConfig cfg = load(c);
  const fs::path dir = db_dir.empty() ? cfg.database_dir : fs::path(db_dir);
  if (dir.empty()) throw ConfigError("localize: no database (pass --db or set 'database')");
  if (c.out.empty()) throw ConfigError("localize: --out is required");
  const auto db = load_database(dir);
  const auto decisions = localize_traverse(cfg, db);
  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / "decisions.csv";
  const auto names = channel_names(db);
  seq::write_decisions_csv(decisions, names, path);
  std::size_t accepted = 0;
  for (const auto& d : decisions) accepted += d.accepted ? 1 : 0;
  std::cout << decisions.size() << " query frames, " << accepted << " accepted -> " << path.string() << '\n';
  return 0;
}

void write_evaluation(const eval::PRCurve& curve, const fs::path& dir) {
  fs::create_directories(dir);
  eval::write_pr_csv(curve, dir / "pr.csv");
  write_text(dir / "summary.json", eval::pr_summary_json(curve));
}

int evaluate(const std::string& decisions_path, const std::string& gt_path, const std::string& mode,
             double tolerance, const std::string& out) {
  const auto gt = io::load_ground_truth(gt_path, io::parse_ground_truth_mode(mode), tolerance);
  const auto decisions = seq::read_decisions_csv(decisions_path);
  const auto curve = eval::sweep_pr(decisions, gt);
  if (!out.empty()) write_evaluation(curve, out);
  std::cout << eval::pr_summary_json(curve) << '\n';
  return 0;
}

int synth_bench(const Common& c) {
  RunConfig cfg = load(c);
  if (!cfg.world) throw ConfigError("synth-bench: config has no synthetic.* keys");
  if (c.out.empty()) throw ConfigError("synth-bench: --out is required");
  const fs::path out = c.out;
  const auto traverse = eval::generate_synthetic(*cfg.world);
  const auto names = channel_names(traverse.database);
  fs::create_directories(out);
  io::write_ground_truth(traverse.ground_truth, out / "ground_truth.csv");

  nlohmann::json summary{{"seed", cfg.seed}, {"templates", traverse.database.size()},
                         {"query_frames", traverse.query_ids.size()}, {"runs", nlohmann::json::object()}};
  const auto run = [&](const std::string& name, seq::LocalizerParams params, std::vector<std::size_t> subset) {
    const auto decisions = localize_descriptors(traverse.database, traverse.query_ids, traverse.query, params, subset);
    const auto curve = eval::sweep_pr(decisions, traverse.ground_truth);
    const fs::path dir = out / name;
    fs::create_directories(dir);
    std::vector<std::string> used;
    if (subset.empty()) {
      used = names;
    } else {
      for (auto i : subset) used.push_back(names[i]);
    }
    seq::write_decisions_csv(decisions, used, dir / "decisions.csv");
    write_evaluation(curve, dir);
    summary["runs"][name] = nlohmann::json::parse(eval::pr_summary_json(curve));
    std::cout << name << ": max F1 " << curve.max_f1 << ", recall@100%P " << curve.recall_at_full_precision << '\n';
  };

  for (const auto& kind : cfg.bench_runs) {
    seq::LocalizerParams p = cfg.localizer;
    if (kind == "mpf") {
      p.fusion_voting = true;
      run("mpf", p, {});
    } else if (kind == "all") {
      p.fusion_voting = false;
      run("all", p, {});
    } else {
      p.fusion_voting = false;
      for (std::size_t i = 0; i < names.size(); ++i) run(dir_name("single_" + names[i]), p, {i});
    }
  }
  write_text(out / "summary.json", summary.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-process fusion place recognition"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config, "YAML run configuration");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "override the configured seed");
    sub->add_option("--out", common.out, "output directory");
  };

  auto* build = app.add_subcommand("build-db", "extract reference descriptors into a template database");
  add_common(build, true);

  std::string db_dir;
  auto* loc = app.add_subcommand("localize", "localize the query traverse against a database");
  add_common(loc, true);
  loc->add_option("--db", db_dir, "database directory (default: 'database' from the config)");

  std::string decisions_path;
  std::string gt_path;
  std::string gt_mode = "frame-offset";
  double tolerance = 10.0;
  auto* ev = app.add_subcommand("evaluate", "precision-recall sweep over a decisions file");
  ev->add_option("--decisions", decisions_path, "decisions CSV")->required();
  ev->add_option("--gt", gt_path, "ground-truth CSV")->required();
  ev->add_option("--mode", gt_mode, "frame-offset or metric");
  ev->add_option("--tolerance", tolerance, "frames or metres");
  ev->add_option("--out", common.out, "output directory for pr.csv and summary.json");

  auto* bench = app.add_subcommand("synth-bench", "run the synthetic benchmark");
  add_common(bench, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return build_db(common);
    if (*loc) return localize(common, db_dir);
    if (*ev) return evaluate(decisions_path, gt_path, gt_mode, tolerance, common.out);
    if (*bench) return synth_bench(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
