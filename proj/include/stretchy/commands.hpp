#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stretchy/datasets.hpp"
#include "stretchy/model.hpp"

namespace stretchy::cli {

/// Flag surface shared by every subcommand. Optional fields fall back to
/// command-specific defaults (see resolve_* below).
struct RunConfig {
  std::string data = "synthetic";  // path or "synthetic"
  std::string delimiter = "\t";
  std::string target = "lpsa";
  std::string split_col = "train";  // empty: no split column
  std::string train_value = "T";

  std::optional<std::size_t> order;
  std::optional<double> q;
  std::vector<double> q_list;
  std::vector<std::size_t> order_list;
  std::optional<double> lambda;
  std::optional<double> a;
  std::optional<std::string> b_mode;
  std::vector<double> b_custom;
  std::optional<std::string> mode;
  std::string transform = "auto";  // auto | on | off

  double tau = 0.0;
  double sparsity_eps = kDefaultSparsityEps;
  std::string std_kind = "stderr";  // stderr | residual
  std::string eval_on = "test";     // train | test | all
  bool residuals = false;

  std::string model;  // model file (written by fit, read by eval/boundary)
  std::string out;
  std::string format = "json";
  bool plot_data = false;
  bool timing = false;

  std::string space = "lp";
  std::vector<double> exponents;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::size_t steps = 101;
};

/// Output of a command. `report` is the JSON form, `csv` the tabular form;
/// `plot_files` holds (suffix, csv) pairs of plot data.
struct CommandResult {
  nlohmann::json report;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> plot_files;
  std::size_t error_count = 0;
};

/// Shortest round-trip decimal form; "nan" / "inf" / "-inf" otherwise.
std::string format_number(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

Dataset load_data(const RunConfig& cfg);

/// Settings actually used by a fit-style command.
struct ResolvedFit {
  std::size_t order;
  SolverConfig solver;
  std::optional<TransformSettings> transform;
};

ResolvedFit resolve_fit(const RunConfig& cfg, const Dataset& data);
ResolvedFit resolve_order_sweep(const RunConfig& cfg, const Dataset& data);

CommandResult cmd_fit(const RunConfig& cfg);
CommandResult cmd_eval(const RunConfig& cfg);
CommandResult cmd_sweep_q(const RunConfig& cfg);
CommandResult cmd_sweep_order(const RunConfig& cfg);
CommandResult cmd_contour(const RunConfig& cfg);
CommandResult cmd_boundary(const RunConfig& cfg);

/// Human-readable monomial name, e.g. "intercept", "lcavol", "x1^2*x2".
std::string term_name(const MonomialBasis& basis, std::size_t term,
                      const std::vector<std::string>& feature_names);

}  // namespace stretchy::cli
