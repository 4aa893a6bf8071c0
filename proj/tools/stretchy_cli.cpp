// Command-line front end: fit / eval / sweep-q / sweep-order / contour / boundary.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stretchy/commands.hpp"
#include "stretchy/error.hpp"

namespace {

using nlohmann::json;
using stretchy::Error;
using stretchy::ErrorCategory;
using stretchy::cli::CommandResult;
using stretchy::cli::RunConfig;

// Options of one subcommand that can also be set from a JSON config file.
struct Registry {
  struct Entry {
    CLI::Option* option;
    std::function<void(const json&)> apply;
  };
  std::map<std::string, Entry> entries;

  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& field, const std::string& desc) {
    CLI::Option* opt = app->add_option("--" + name, field, desc);
    entries[name] = {opt, [&field](const json& v) { field = v.get<T>(); }};
    return opt;
  }
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, std::optional<T>& field,
                   const std::string& desc) {
    CLI::Option* opt = app->add_option("--" + name, field, desc);
    entries[name] = {opt, [&field](const json& v) { field = v.get<T>(); }};
    return opt;
  }
  void flag(CLI::App* app, const std::string& name, bool& field, const std::string& desc) {
    CLI::Option* opt = app->add_flag("--" + name, field, desc);
    entries[name] = {opt, [&field](const json& v) { field = v.get<bool>(); }};
  }
};

void add_data_options(CLI::App* app, Registry& reg, RunConfig& cfg) {
  reg.add(app, "data", cfg.data, "Delimited data file, or 'synthetic'");
  reg.add(app, "delimiter", cfg.delimiter, "Field delimiter (default tab)");
  reg.add(app, "target", cfg.target, "Target column name");
  reg.add(app, "split-col", cfg.split_col, "Train/test flag column ('' for none)");
  reg.add(app, "train-value", cfg.train_value, "Split value marking training rows");
}

void add_fit_options(CLI::App* app, Registry& reg, RunConfig& cfg) {
  reg.add(app, "lambda", cfg.lambda, "Regularization weight added to the stretched gram");
  reg.add(app, "a", cfg.a, "Exponential warp scale");
  reg.add(app, "b-mode", cfg.b_mode, "Warp offset: zero|raw-mean|a-raw-mean|custom");
  reg.add(app, "b", cfg.b_custom, "Custom per-column warp offsets (b-mode custom)");
  reg.add(app, "mode", cfg.mode, "Solver: auto|primal|dual");
  reg.add(app, "transform", cfg.transform, "First-quadrant transform: auto|on|off");
  reg.add(app, "sparsity-eps", cfg.sparsity_eps, "Threshold for counting nonzero coefficients");
  reg.add(app, "std-kind", cfg.std_kind, "STD metric: stderr (of squared residuals) | residual");
}

void add_output_options(CLI::App* app, Registry& reg, RunConfig& cfg) {
  reg.add(app, "out", cfg.out, "Output report path (stdout if omitted)");
  reg.add(app, "format", cfg.format, "Report format: json|csv");
  reg.flag(app, "plot-data", cfg.plot_data, "Also write plot-data CSVs next to --out");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io_error, "cannot write '" + path + "'");
  out << text;
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + "." + suffix + ".csv")).string();
}

void emit(const RunConfig& cfg, const CommandResult& res) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw Error(ErrorCategory::usage_error, "--format must be json or csv");
  }
  const std::string text = cfg.format == "json" ? res.report.dump(2) + "\n" : res.csv;
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.out, text);
    if (cfg.plot_data) {
      for (const auto& [suffix, content] : res.plot_files) {
        write_text(sibling_path(cfg.out, suffix), content);
      }
    }
  }
}

void report_error(const std::string& category, const std::string& message) {
  std::cerr << json{{"error", {{"category", category}, {"message", message}}}}.dump() << '\n';
}

void apply_config_file(const std::string& path, Registry& reg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io_error, "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::parse_error, std::string("malformed config file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCategory::parse_error, "config file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto it = reg.entries.find(key);
    if (it == reg.entries.end()) {
      throw Error(ErrorCategory::usage_error, "unknown config key '" + key + "'");
    }
    if (it->second.option->count() > 0) continue;  // command-line flag wins
    try {
      it->second.apply(value);
    } catch (const json::exception& e) {
      throw Error(ErrorCategory::usage_error, "config key '" + key + "': " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stretchy polynomial regression: fits, evaluations and experiment sweeps"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file whose keys mirror flag names");

  RunConfig cfg;
  std::map<CLI::App*, Registry> registries;
  std::map<CLI::App*, std::function<CommandResult(const RunConfig&)>> handlers;

  {
    auto* sub = app.add_subcommand("fit", "Fit a model and write it with --model");
    auto& reg = registries[sub];
    add_data_options(sub, reg, cfg);
    reg.add(sub, "order", cfg.order, "Polynomial order r");
    reg.add(sub, "q", cfg.q, "Stretch parameter q (q != 1)");
    add_fit_options(sub, reg, cfg);
    reg.add(sub, "model", cfg.model, "Where to write the model JSON");
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_fit;
  }
  {
    auto* sub = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
    auto& reg = registries[sub];
    add_data_options(sub, reg, cfg);
    reg.add(sub, "model", cfg.model, "Model JSON to evaluate");
    reg.add(sub, "on", cfg.eval_on, "Rows to evaluate: train|test|all");
    reg.add(sub, "sparsity-eps", cfg.sparsity_eps, "Threshold for counting nonzero coefficients");
    reg.add(sub, "std-kind", cfg.std_kind, "STD metric: stderr|residual");
    reg.flag(sub, "residuals", cfg.residuals, "Include residuals in the report");
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_eval;
  }
  {
    auto* sub = app.add_subcommand("sweep-q", "One fit per q value; coefficient/metric table");
    auto& reg = registries[sub];
    add_data_options(sub, reg, cfg);
    reg.add(sub, "order", cfg.order, "Polynomial order r");
    reg.add(sub, "q-list", cfg.q_list, "q values to sweep")->delimiter(',');
    add_fit_options(sub, reg, cfg);
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_sweep_q;
  }
  {
    auto* sub = app.add_subcommand("sweep-order", "One fit per polynomial order; D/MSE table");
    auto& reg = registries[sub];
    add_data_options(sub, reg, cfg);
    reg.add(sub, "order-list", cfg.order_list, "Polynomial orders to sweep")->delimiter(',');
    reg.add(sub, "q", cfg.q, "Stretch parameter q (default 1.0001)");
    add_fit_options(sub, reg, cfg);
    reg.flag(sub, "timing", cfg.timing, "Add a wall-time column to the CSV table");
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_sweep_order;
  }
  {
    auto* sub = app.add_subcommand("contour", "Evaluate a shrinkage-space measure on a 2-D grid");
    auto& reg = registries[sub];
    reg.add(sub, "space", cfg.space, "lp|qtilde|qspace|qspace2");
    reg.add(sub, "exponent", cfg.exponents, "Exponent(s) p or q")->delimiter(',');
    reg.add(sub, "grid-min", cfg.grid_min, "Lower grid bound (default -1)");
    reg.add(sub, "grid-max", cfg.grid_max, "Upper grid bound (default 1)");
    reg.add(sub, "steps", cfg.steps, "Grid points per axis");
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_contour;
  }
  {
    auto* sub = app.add_subcommand("boundary", "Decision-boundary grid of a 2-D model");
    auto& reg = registries[sub];
    reg.add(sub, "model", cfg.model, "Model JSON");
    reg.add(sub, "tau", cfg.tau, "Decision threshold");
    reg.add(sub, "grid-min", cfg.grid_min, "Lower grid bound (default 0)");
    reg.add(sub, "grid-max", cfg.grid_max, "Upper grid bound (default 0.3)");
    reg.add(sub, "steps", cfg.steps, "Grid points per axis");
    add_output_options(sub, reg, cfg);
    handlers[sub] = stretchy::cli::cmd_boundary;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage_error", e.what());
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(config_path, registries[sub]);
    const CommandResult res = handlers[sub](cfg);
    emit(cfg, res);
    if (res.error_count > 0) {
      report_error("sweep_cell_errors",
                   std::to_string(res.error_count) + " sweep cell(s) failed; see the report");
      return 1;
    }
  } catch (const Error& e) {
    report_error(std::string(stretchy::to_string(e.category())), e.what());
    return e.category() == ErrorCategory::usage_error ? 2 : 1;
  } catch (const std::exception& e) {
    report_error("internal_error", e.what());
    return 1;
  }
  return 0;
}
