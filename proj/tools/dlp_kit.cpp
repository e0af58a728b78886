// dlp-kit: command-line front end over the dlpkit C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlpkit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code(dlpk_status status) {
  switch (status) {
    case DLPK_OK:
      return kExitOk;
    case DLPK_ERR_NOT_FOUND:
    case DLPK_ERR_INCONSISTENT:
    case DLPK_ERR_ABORTED:
      return kExitDomain;
    default:
      return kExitUsage;
  }
}

int report_failure(dlpk_status status) {
  std::cerr << "error (" << dlpk_status_name(status) << "): " << dlpk_last_error() << "\n";
  return exit_code(status);
}

void print_text(char* text, const std::string& out_path) {
  if (!text) return;
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
  }
  dlpk_text_free(text);
}

struct ConfigArgs {
  std::string config_path;
  std::optional<double> threshold, kappa, shrink_rho, ddt_threshold, min_radius, refine_factor;
  std::optional<int> max_depth, window, orientation;
  std::optional<std::uint64_t> seed;
};

bool load_config(const ConfigArgs& args, dlpk_config& cfg) {
  dlpk_config_init(&cfg);
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in.good()) {
      std::cerr << "error: cannot open config file: " << args.config_path << "\n";
      return false;
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      std::cerr << "error: config file is not a JSON object: " << args.config_path << "\n";
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "threshold")
        cfg.threshold = value.get<double>();
      else if (key == "max_depth")
        cfg.max_depth = value.get<int>();
      else if (key == "refine_factor")
        cfg.refine_factor = value.get<double>();
      else if (key == "window")
        cfg.window = value.get<int>();
      else if (key == "orientation") {
        std::string o = value.get<std::string>();
        if (o != "maximize" && o != "minimize") {
          std::cerr << "error: orientation must be maximize or minimize\n";
          return false;
        }
        cfg.orientation = o == "minimize" ? 1 : 0;
      } else if (key == "kappa")
        cfg.kappa = value.get<double>();
      else if (key == "shrink_rho")
        cfg.shrink_rho = value.get<double>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "ddt_threshold")
        cfg.ddt_threshold = value.get<double>();
      else if (key == "min_radius")
        cfg.min_radius = value.get<double>();
      else {
        std::cerr << "error: unknown config key '" << key << "'\n";
        return false;
      }
    }
  }
  if (args.threshold) cfg.threshold = *args.threshold;
  if (args.max_depth) cfg.max_depth = *args.max_depth;
  if (args.refine_factor) cfg.refine_factor = *args.refine_factor;
  if (args.window) cfg.window = *args.window;
  if (args.orientation) cfg.orientation = *args.orientation;
  if (args.kappa) cfg.kappa = *args.kappa;
  if (args.shrink_rho) cfg.shrink_rho = *args.shrink_rho;
  if (args.seed) cfg.seed = *args.seed;
  if (args.ddt_threshold) cfg.ddt_threshold = *args.ddt_threshold;
  if (args.min_radius) cfg.min_radius = *args.min_radius;
  return true;
}

int interactive_oracle(const char* bits, void*) {
  while (true) {
    std::cout << "f(" << bits << ")? [0/1] " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return -1;
    if (line == "0") return 0;
    if (line == "1") return 1;
    if (line == "q" || line == "quit") return -1;
    std::cout << "please answer 0 or 1 (q aborts)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlp-kit: model-search toolkit"};
  app.require_subcommand(1);

  ConfigArgs cargs;
  app.add_option("--config", cargs.config_path, "JSON config file; flags override it");

  // mbf
  auto* mbf = app.add_subcommand("mbf", "monotone Boolean function tools");
  mbf->require_subcommand(1);

  int chains_n = 0;
  auto* mbf_chains = mbf->add_subcommand("chains", "print the Hansel chain cover");
  mbf_chains->add_option("--n", chains_n, "cube dimension (1..24)")->required();

  int restore_n = 0;
  std::string restore_oracle, restore_trace;
  auto* mbf_restore = mbf->add_subcommand("restore", "restore a monotone function");
  mbf_restore->add_option("--n", restore_n, "cube dimension (1..24)")->required();
  mbf_restore
      ->add_option("--oracle", restore_oracle,
                   "table:<path> | expr:<formula> | interactive")
      ->required();
  mbf_restore->add_option("--trace", restore_trace, "write the restoration trace (JSONL)");

  // models
  auto* models = app.add_subcommand("models", "polynomial model measures and orders");
  models->require_subcommand(1);
  std::string order_vars, order_a, order_b;
  auto* models_order = models->add_subcommand("order", "compare two polynomial models");
  models_order->add_option("--vars", order_vars, "comma-separated variables, e.g. x,y")
      ->required();
  models_order->add_option("--a", order_a, "first polynomial, e.g. \"5x + by^2 = 0\"")
      ->required();
  models_order->add_option("--b", order_b, "second polynomial")->required();

  // shapes
  auto* shapes = app.add_subcommand("shapes", "noisy scenes and shape detection");
  shapes->require_subcommand(1);

  int gen_n = 0, gen_m = 0;
  double gen_contrast = 3.0;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> gen_shapes;
  std::string gen_out;
  auto* shapes_gen = shapes->add_subcommand("gen", "generate a noisy point cloud");
  shapes_gen->add_option("--n", gen_n, "grid size")->required();
  shapes_gen->add_option("--m", gen_m, "point count")->required();
  shapes_gen->add_option("--shape", gen_shapes,
                         "circle:cx,cy,r or lens:xa,xg,yb,h (repeatable)");
  shapes_gen->add_option("--contrast", gen_contrast, "inside/outside density ratio (> 1)");
  shapes_gen->add_option("--seed", gen_seed, "random seed");
  shapes_gen->add_option("--out", gen_out, "output JSONL path")->required();

  std::string det_algo = "brute", det_kind = "circle", det_in, det_trace;
  int det_n = 0;
  std::optional<double> det_t;
  auto* shapes_detect = shapes->add_subcommand("detect", "detect planted shapes");
  shapes_detect->add_option("--algo", det_algo, "brute | dlp");
  shapes_detect->add_option("--kind", det_kind, "circle | lens");
  shapes_detect->add_option("--n", det_n, "grid size")->required();
  shapes_detect->add_option("--in", det_in, "input JSONL point cloud")->required();
  shapes_detect->add_option("--t", det_t, "DDT density-gap threshold");
  shapes_detect->add_option("--trace", det_trace, "write the search trace (dlp only)");

  std::string scal_kind = "circle", scal_sizes;
  bool scal_huge = false;
  std::uint64_t scal_seed = 0;
  auto* shapes_scaling = shapes->add_subcommand("scaling", "operation-count scaling table");
  shapes_scaling->add_option("--kind", scal_kind, "circle | lens");
  shapes_scaling->add_option("--sizes", scal_sizes, "n:m pairs, e.g. 10:1,100:10")->required();
  shapes_scaling->add_flag("--yes-huge", scal_huge, "allow sizes beyond the desk-scale caps");
  shapes_scaling->add_option("--seed", scal_seed, "random seed");

  // interval
  auto* interval = app.add_subcommand("interval", "interval localization demo");
  interval->require_subcommand(1);
  std::string int_target = "0,4", int_trace;
  int int_m = 500;
  double int_contrast = 3.0, int_resolution = 0.1;
  std::uint64_t int_seed = 0;
  auto* interval_demo = interval->add_subcommand("demo", "localize a hidden interval");
  interval_demo->add_option("--target", int_target, "hidden interval a,b inside [0,10]");
  interval_demo->add_option("--m", int_m, "sample count");
  interval_demo->add_option("--contrast", int_contrast, "inside/outside density ratio");
  interval_demo->add_option("--resolution", int_resolution, "localization resolution");
  interval_demo->add_option("--seed", int_seed, "random seed");
  interval_demo->add_option("--trace", int_trace, "write the search trace (JSONL)");

  // reason
  std::string kb_path, query, rules;
  int depth = 1;
  auto* reason = app.add_subcommand("reason", "derive facts from a knowledge base");
  reason->add_option("--kb", kb_path, "KB file, one w(m, e, m') per line")->required();
  reason->add_option("--query", query, "goal fact, e.g. \"w(m1,e,m3)\"")->required();
  reason->add_option("--depth", depth, "evidence-term nesting bound");
  reason->add_option("--rules", rules, "comma-separated subset of ca,da,dca,ia,ta");

  // viz
  std::string viz_trace, viz_format = "text", viz_arrange = "chronological", viz_out;
  int viz_highlight = -1;
  auto* viz = app.add_subcommand("viz", "render a trace as a bar diagram");
  viz->add_option("--trace", viz_trace, "trace file (JSONL)")->required();
  viz->add_option("--format", viz_format, "svg | text");
  viz->add_option("--arrange", viz_arrange, "chronological | pareto");
  viz->add_option("--out", viz_out, "output file (default stdout)");
  viz->add_option("--highlight", viz_highlight, "highlight vectors of this weight");

  // config overrides
  for (CLI::App* sub : {shapes_detect, interval_demo}) {
    sub->add_option_function<double>(
        "--threshold", [&](double v) { cargs.threshold = v; }, "engine acceptance level");
    sub->add_option_function<double>(
        "--kappa", [&](double v) { cargs.kappa = v; }, "measure level per stride unit");
  }
  interval_demo->add_option_function<double>(
      "--rho", [&](double v) { cargs.shrink_rho = v; }, "sigma shrink factor");
  shapes_detect->add_option_function<double>(
      "--min-radius", [&](double v) { cargs.min_radius = v; }, "detection size floor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  dlpk_config cfg;
  if (!load_config(cargs, cfg)) return kExitUsage;
  if (det_t) cfg.ddt_threshold = *det_t;

  if (mbf_chains->parsed()) {
    dlpk_chains* chains = nullptr;
    dlpk_status st = dlpk_chains_build(chains_n, &chains);
    if (st != DLPK_OK) return report_failure(st);
    char* text = nullptr;
    st = dlpk_chains_text(chains, &text);
    dlpk_chains_free(chains);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (mbf_restore->parsed()) {
    dlpk_restore* result = nullptr;
    dlpk_status st;
    const char* trace = restore_trace.empty() ? nullptr : restore_trace.c_str();
    if (restore_oracle == "interactive") {
      st = dlpk_restore_run(restore_n, "callback", interactive_oracle, nullptr, trace,
                            &result);
    } else {
      st = dlpk_restore_run(restore_n, restore_oracle.c_str(), nullptr, nullptr, trace,
                            &result);
    }
    if (st != DLPK_OK) return report_failure(st);
    char* text = nullptr;
    st = dlpk_restore_summary(result, &text);
    dlpk_restore_free(result);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (models_order->parsed()) {
    char* text = nullptr;
    dlpk_status st =
        dlpk_models_order(order_vars.c_str(), order_a.c_str(), order_b.c_str(), &text);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (shapes_gen->parsed()) {
    std::string spec;
    for (std::size_t i = 0; i < gen_shapes.size(); ++i) {
      if (i) spec += ";";
      spec += gen_shapes[i];
    }
    if (cargs.seed) gen_seed = *cargs.seed;
    char* text = nullptr;
    dlpk_status st = dlpk_scene_gen(gen_n, gen_m, spec.c_str(), gen_contrast, gen_seed,
                                    gen_out.c_str(), &text);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (shapes_detect->parsed()) {
    char* text = nullptr;
    dlpk_status st = dlpk_shapes_detect(det_algo.c_str(), det_kind.c_str(), det_n,
                                        det_in.c_str(), &cfg,
                                        det_trace.empty() ? nullptr : det_trace.c_str(),
                                        &text);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (shapes_scaling->parsed()) {
    if (cargs.seed) scal_seed = *cargs.seed;
    char* text = nullptr;
    dlpk_status st = dlpk_shapes_scaling(scal_kind.c_str(), scal_sizes.c_str(),
                                         scal_huge ? 1 : 0, scal_seed, &text);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, "");
    return kExitOk;
  }

  if (interval_demo->parsed()) {
    double a = 0, b = 0;
    if (std::sscanf(int_target.c_str(), "%lf,%lf", &a, &b) != 2) {
      std::cerr << "usage error: --target wants a,b like 0,4\n";
      return kExitUsage;
    }
    cfg.seed = int_seed;
    if (cargs.seed) cfg.seed = *cargs.seed;
    char* text = nullptr;
    dlpk_status st = dlpk_interval_demo(a, b, int_m, int_contrast, int_resolution, &cfg,
                                        int_trace.empty() ? nullptr : int_trace.c_str(),
                                        &text);
    print_text(text, "");
    if (st != DLPK_OK && st != DLPK_ERR_NOT_FOUND) return report_failure(st);
    return st == DLPK_OK ? kExitOk : kExitDomain;
  }

  if (reason->parsed()) {
    char* text = nullptr;
    dlpk_status st = dlpk_reason(kb_path.c_str(), query.c_str(), depth,
                                 rules.empty() ? nullptr : rules.c_str(), &text);
    print_text(text, "");
    if (st != DLPK_OK && st != DLPK_ERR_NOT_FOUND) return report_failure(st);
    return st == DLPK_OK ? kExitOk : kExitDomain;
  }

  if (viz->parsed()) {
    char* text = nullptr;
    dlpk_status st = dlpk_viz_render(viz_trace.c_str(), viz_format.c_str(),
                                     viz_arrange.c_str(), viz_highlight, &text);
    if (st != DLPK_OK) return report_failure(st);
    print_text(text, viz_out);
    return kExitOk;
  }

  std::cerr << app.help();
  return kExitUsage;
}
