#include "stretchy/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "stretchy/error.hpp"
#include "stretchy/measures.hpp"

namespace stretchy::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json error_json(const Error& e) {
  return {{"category", std::string(to_string(e.category()))}, {"message", e.what()}};
}

void check_q(double q) {
  if (!std::isfinite(q) || !(std::fabs(q - 1.0) >= kMinStretchGap)) {
    throw Error(ErrorCategory::usage_error,
                "q = " + format_number(q) + " is not allowed; |q - 1| must be >= 1e-6");
  }
}

struct Splits {
  Dataset train;
  std::optional<Dataset> test;
};

Splits make_splits(const Dataset& data) {
  if (!data.split) return {data, std::nullopt};
  auto [train, test] = split(data);
  if (test.rows() == 0) return {std::move(train), std::nullopt};
  return {std::move(train), std::move(test)};
}

std::optional<TransformSettings> resolve_transform(const RunConfig& cfg, const Dataset& data,
                                                   double default_a, BMode default_mode) {
  bool enabled = false;
  if (cfg.transform == "on") {
    enabled = true;
  } else if (cfg.transform == "off") {
    enabled = false;
  } else if (cfg.transform == "auto") {
    enabled = data.id != "synthetic_three_points";
  } else {
    throw Error(ErrorCategory::usage_error, "--transform must be auto, on or off");
  }
  if (!enabled) return std::nullopt;
  TransformSettings t;
  t.a = cfg.a.value_or(default_a);
  t.b_mode = cfg.b_mode ? parse_b_mode(*cfg.b_mode) : default_mode;
  if (t.b_mode == BMode::custom) t.custom_b = cfg.b_custom;
  return t;
}

json transform_settings_json(const std::optional<TransformSettings>& t) {
  if (!t) return nullptr;
  json j = {{"a", t->a}, {"b_mode", std::string(to_string(t->b_mode))}};
  if (t->custom_b) j["b_custom"] = *t->custom_b;
  return j;
}

json config_json(const RunConfig& cfg, const ResolvedFit* fit) {
  json j = {{"data", cfg.data},
            {"target", cfg.target},
            {"split_col", cfg.split_col},
            {"train_value", cfg.train_value},
            {"sparsity_eps", cfg.sparsity_eps},
            {"std_kind", cfg.std_kind}};
  if (fit) {
    j["order"] = fit->order;
    j["q"] = fit->solver.q;
    j["lambda"] = fit->solver.lambda;
    j["mode"] = std::string(to_string(fit->solver.mode));
    j["transform"] = transform_settings_json(fit->transform);
  }
  if (!cfg.q_list.empty()) j["q_list"] = cfg.q_list;
  if (!cfg.order_list.empty()) j["order_list"] = cfg.order_list;
  return j;
}

double std_metric(const RunConfig& cfg, const EvalReport& r) {
  return cfg.std_kind == "residual" ? r.residual_std : r.std_err;
}

json metrics_json(const EvalReport& r) {
  return {{"mse", r.mse}, {"std_err", r.std_err}, {"residual_std", r.residual_std}, {"n", r.n}};
}

std::string config_comment(const json& config) { return "# config: " + config.dump() + "\n"; }

void check_std_kind(const RunConfig& cfg) {
  if (cfg.std_kind != "stderr" && cfg.std_kind != "residual") {
    throw Error(ErrorCategory::usage_error, "--std-kind must be stderr or residual");
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string term_name(const MonomialBasis& basis, std::size_t term,
                      const std::vector<std::string>& feature_names) {
  const auto e = basis.exponents(term);
  std::string name;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!name.empty()) name += '*';
    name += k < feature_names.size() ? feature_names[k] : "x" + std::to_string(k + 1);
    if (e[k] > 1) name += "^" + std::to_string(e[k]);
  }
  return name.empty() ? "intercept" : name;
}

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data == "synthetic") return synthetic_three_points();
  if (cfg.delimiter.size() != 1) {
    throw Error(ErrorCategory::usage_error, "--delimiter must be a single character");
  }
  LoadOptions opts;
  opts.delimiter = cfg.delimiter[0];
  opts.target_column = cfg.target;
  opts.split_column = cfg.split_col.empty() ? std::nullopt : std::optional<std::string>(cfg.split_col);
  opts.split_train_value = cfg.train_value;
  return load_delimited(cfg.data, opts);
}

ResolvedFit resolve_fit(const RunConfig& cfg, const Dataset& data) {
  ResolvedFit r;
  r.order = cfg.order.value_or(1);
  r.solver.q = cfg.q.value_or(2.0);
  r.solver.lambda = cfg.lambda.value_or(0.0);
  r.solver.mode = cfg.mode ? parse_solve_mode(*cfg.mode) : SolveMode::automatic;
  r.transform = resolve_transform(cfg, data, 1.0, BMode::raw_mean);
  return r;
}

ResolvedFit resolve_order_sweep(const RunConfig& cfg, const Dataset& data) {
  ResolvedFit r;
  r.order = 0;
  r.solver.q = cfg.q.value_or(1.0001);
  r.solver.lambda = cfg.lambda.value_or(1e-4);
  r.solver.mode = cfg.mode ? parse_solve_mode(*cfg.mode) : SolveMode::dual;
  r.transform = resolve_transform(cfg, data, 1e-5, BMode::a_times_raw_mean);
  return r;
}

CommandResult cmd_fit(const RunConfig& cfg) {
  if (cfg.q) check_q(*cfg.q);
  check_std_kind(cfg);
  const auto t0 = Clock::now();
  const Dataset data = load_data(cfg);
  const ResolvedFit rf = resolve_fit(cfg, data);
  const Splits s = make_splits(data);

  FitOptions opts{rf.order, rf.solver, rf.transform, data.id};
  const FitResult fr = fit(s.train.x, s.train.y, opts);
  if (!cfg.model.empty()) save_model(fr.model, cfg.model);

  const EvalReport train = evaluate(fr.model, s.train.x, s.train.y, cfg.sparsity_eps);
  CommandResult out;
  json& rep = out.report;
  rep["command"] = "fit";
  rep["config"] = config_json(cfg, &rf);
  rep["m"] = s.train.rows();
  rep["d"] = s.train.features();
  rep["terms"] = fr.terms;
  rep["mode"] = std::string(to_string(fr.solution.mode));
  rep["condition"] = fr.solution.condition;
  rep["ill_conditioned"] = fr.solution.ill_conditioned;
  rep["nnz"] = train.nnz;
  rep["train"] = metrics_json(train);
  if (s.test) rep["test"] = metrics_json(evaluate(fr.model, s.test->x, s.test->y, cfg.sparsity_eps));
  rep["alpha"] = std::vector<double>(fr.model.alpha.begin(), fr.model.alpha.end());
  if (!cfg.model.empty()) rep["model_file"] = cfg.model;
  rep["provenance"] = {{"timestamp", fr.model.provenance.timestamp},
                       {"wall_time_s", seconds_since(t0)}};

  std::ostringstream csv;
  csv << config_comment(rep["config"]);
  csv << "term,alpha\n";
  for (std::size_t t = 0; t < fr.model.basis.size(); ++t) {
    csv << csv_field(term_name(fr.model.basis, t, data.feature_names)) << ','
        << format_number(fr.model.alpha[static_cast<Eigen::Index>(t)]) << '\n';
  }
  out.csv = csv.str();
  return out;
}

CommandResult cmd_eval(const RunConfig& cfg) {
  if (cfg.model.empty()) throw Error(ErrorCategory::usage_error, "eval needs --model");
  check_std_kind(cfg);
  const StretchyModel model = load_model(cfg.model);
  const Dataset data = load_data(cfg);

  Dataset rows;
  if (!data.split || cfg.eval_on == "all") {
    rows = data;
  } else {
    auto [train, test] = split(data);
    if (cfg.eval_on == "train") {
      rows = std::move(train);
    } else if (cfg.eval_on == "test") {
      rows = std::move(test);
    } else {
      throw Error(ErrorCategory::usage_error, "--on must be train, test or all");
    }
  }
  if (rows.rows() == 0) {
    throw Error(ErrorCategory::invalid_argument, "evaluation set '" + rows.id + "' is empty");
  }

  const EvalReport r = evaluate(model, rows.x, rows.y, cfg.sparsity_eps);
  CommandResult out;
  out.report = {{"command", "eval"},
                {"config", config_json(cfg, nullptr)},
                {"rows", rows.id},
                {"mse", r.mse},
                {"std_err", r.std_err},
                {"residual_std", r.residual_std},
                {"std", std_metric(cfg, r)},
                {"n", r.n},
                {"nnz", r.nnz}};
  if (cfg.residuals) {
    out.report["residuals"] = std::vector<double>(r.residuals.begin(), r.residuals.end());
    std::ostringstream res;
    res << "index,residual\n";
    for (Eigen::Index i = 0; i < r.residuals.size(); ++i) {
      res << i << ',' << format_number(r.residuals[i]) << '\n';
    }
    out.plot_files.emplace_back("residuals", res.str());
  }
  std::ostringstream csv;
  csv << config_comment(out.report["config"]);
  csv << "mse,std_err,residual_std,n,nnz\n"
      << format_number(r.mse) << ',' << format_number(r.std_err) << ','
      << format_number(r.residual_std) << ',' << r.n << ',' << r.nnz << '\n';
  out.csv = csv.str();
  return out;
}

CommandResult cmd_sweep_q(const RunConfig& cfg) {
  if (cfg.q_list.empty()) throw Error(ErrorCategory::usage_error, "sweep-q needs a non-empty --q-list");
  for (double q : cfg.q_list) check_q(q);
  check_std_kind(cfg);

  const Dataset data = load_data(cfg);
  ResolvedFit rf = resolve_fit(cfg, data);
  const Splits s = make_splits(data);
  const MonomialBasis basis = enumerate_basis(s.train.features(), rf.order);
  const std::size_t terms = basis.size();

  CommandResult out;
  json& rep = out.report;
  rep["command"] = "sweep-q";
  json config = config_json(cfg, &rf);
  config.erase("q");
  rep["config"] = config;
  std::vector<std::string> names;
  for (std::size_t t = 0; t < terms; ++t) names.push_back(term_name(basis, t, data.feature_names));
  rep["terms"] = names;
  rep["degrees"] = json::array();
  for (std::size_t t = 0; t < terms; ++t) rep["degrees"].push_back(basis.degree(t));

  struct Cell {
    double q;
    std::optional<FitResult> fit;
    std::optional<EvalReport> train, test;
    std::optional<Error> error;
  };
  std::vector<Cell> cells;
  json wall = json::array();
  for (double q : cfg.q_list) {
    Cell c{q, {}, {}, {}, {}};
    const auto t0 = Clock::now();
    try {
      FitOptions opts{rf.order, rf.solver, rf.transform, data.id};
      opts.solver.q = q;
      c.fit = fit(s.train.x, s.train.y, opts);
      c.train = evaluate(c.fit->model, s.train.x, s.train.y, cfg.sparsity_eps);
      if (s.test) c.test = evaluate(c.fit->model, s.test->x, s.test->y, cfg.sparsity_eps);
    } catch (const Error& e) {
      c.fit.reset();
      c.error = e;
      ++out.error_count;
    }
    wall.push_back(seconds_since(t0));
    cells.push_back(std::move(c));
  }

  rep["columns"] = json::array();
  for (const Cell& c : cells) {
    json col = {{"q", c.q}};
    if (c.error) {
      col["error"] = error_json(*c.error);
    } else {
      col["alpha"] = std::vector<double>(c.fit->model.alpha.begin(), c.fit->model.alpha.end());
      col["mode"] = std::string(to_string(c.fit->solution.mode));
      col["condition"] = c.fit->solution.condition;
      col["nnz"] = c.train->nnz;
      col["train"] = metrics_json(*c.train);
      if (c.test) col["test"] = metrics_json(*c.test);
    }
    rep["columns"].push_back(col);
  }
  rep["provenance"] = {{"wall_time_s", wall}};

  // Wide table: one row per parameter / metric, one column per q.
  std::ostringstream csv;
  csv << config_comment(config);
  csv << "parameter";
  for (const Cell& c : cells) csv << ",q=" << format_number(c.q);
  csv << '\n';
  auto row = [&](const std::string& label, auto&& value_of) {
    csv << csv_field(label);
    for (const Cell& c : cells) {
      csv << ',';
      if (c.error) {
        csv << "error:" << to_string(c.error->category());
      } else {
        csv << value_of(c);
      }
    }
    csv << '\n';
  };
  for (std::size_t t = 0; t < terms; ++t) {
    row(names[t], [&](const Cell& c) {
      return format_number(c.fit->model.alpha[static_cast<Eigen::Index>(t)]);
    });
  }
  if (rf.order > 1) {
    for (std::size_t k = 0; k <= rf.order; ++k) {
      row("deg" + std::to_string(k) + "_max_abs", [&](const Cell& c) {
        double m = 0.0;
        for (std::size_t t = 0; t < terms; ++t) {
          if (basis.degree(t) == k) {
            m = std::max(m, std::fabs(c.fit->model.alpha[static_cast<Eigen::Index>(t)]));
          }
        }
        return format_number(m);
      });
    }
  }
  row("nnz", [&](const Cell& c) { return std::to_string(c.train->nnz); });
  row("train_MSE", [&](const Cell& c) { return format_number(c.train->mse); });
  if (s.test) {
    row("MSE", [&](const Cell& c) { return format_number(c.test->mse); });
    row("STD", [&](const Cell& c) { return format_number(std_metric(cfg, *c.test)); });
  } else {
    row("STD", [&](const Cell& c) { return format_number(std_metric(cfg, *c.train)); });
  }
  out.csv = csv.str();

  // Coefficient value versus q, long format.
  std::ostringstream plot;
  plot << "q,index,term,alpha\n";
  for (const Cell& c : cells) {
    if (c.error) continue;
    for (std::size_t t = 0; t < terms; ++t) {
      plot << format_number(c.q) << ',' << t << ',' << csv_field(names[t]) << ','
           << format_number(c.fit->model.alpha[static_cast<Eigen::Index>(t)]) << '\n';
    }
  }
  out.plot_files.emplace_back("alpha_vs_q", plot.str());
  return out;
}

CommandResult cmd_sweep_order(const RunConfig& cfg) {
  if (cfg.order_list.empty()) {
    throw Error(ErrorCategory::usage_error, "sweep-order needs a non-empty --order-list");
  }
  if (cfg.q) check_q(*cfg.q);
  check_std_kind(cfg);

  const Dataset data = load_data(cfg);
  const ResolvedFit rf = resolve_order_sweep(cfg, data);
  const Splits s = make_splits(data);

  CommandResult out;
  json& rep = out.report;
  rep["command"] = "sweep-order";
  json config = config_json(cfg, &rf);
  config.erase("order");
  rep["config"] = config;
  rep["rows"] = json::array();
  json wall = json::array();

  std::ostringstream csv;
  csv << config_comment(config);
  csv << "r,D,mode,train_MSE,test_MSE,test_STD,condition,status";
  if (cfg.timing) csv << ",wall_time_s";
  csv << '\n';

  std::optional<std::pair<std::size_t, Vector>> largest;
  for (std::size_t r : cfg.order_list) {
    const auto t0 = Clock::now();
    json row = {{"r", r}};
    std::ostringstream line;
    line << r << ',';
    try {
      const std::uint64_t d_terms = count_terms(s.train.features(), r);
      row["D"] = d_terms;
      line << d_terms << ',';
      FitOptions opts{r, rf.solver, rf.transform, data.id};
      const FitResult fr = fit(s.train.x, s.train.y, opts);
      const EvalReport train = evaluate(fr.model, s.train.x, s.train.y, cfg.sparsity_eps);
      row["mode"] = std::string(to_string(fr.solution.mode));
      row["condition"] = fr.solution.condition;
      row["ill_conditioned"] = fr.solution.ill_conditioned;
      row["nnz"] = train.nnz;
      row["train"] = metrics_json(train);
      line << to_string(fr.solution.mode) << ',' << format_number(train.mse) << ',';
      if (s.test) {
        const EvalReport test = evaluate(fr.model, s.test->x, s.test->y, cfg.sparsity_eps);
        row["test"] = metrics_json(test);
        line << format_number(test.mse) << ',' << format_number(std_metric(cfg, test)) << ',';
      } else {
        line << ",,";
      }
      line << format_number(fr.solution.condition) << ",ok";
      if (!largest || r >= largest->first) largest.emplace(r, fr.model.alpha);
    } catch (const Error& e) {
      row["error"] = error_json(e);
      ++out.error_count;
      line.str("");
      line << r << ',' << (row.contains("D") ? row["D"].dump() : "") << ",,,,,,error:"
           << to_string(e.category());
    }
    const double secs = seconds_since(t0);
    wall.push_back(secs);
    if (cfg.timing) line << ',' << format_number(secs);
    csv << line.str() << '\n';
    rep["rows"].push_back(row);
  }
  rep["provenance"] = {{"wall_time_s", wall}};
  out.csv = csv.str();

  if (largest) {
    std::ostringstream plot;
    plot << "# r=" << largest->first << "\nindex,alpha\n";
    for (Eigen::Index i = 0; i < largest->second.size(); ++i) {
      plot << i << ',' << format_number(largest->second[i]) << '\n';
    }
    out.plot_files.emplace_back("alpha_vs_index", plot.str());
  }
  return out;
}

CommandResult cmd_contour(const RunConfig& cfg) {
  const MeasureSpace space = parse_measure_space(cfg.space);
  const std::vector<double> exponents = cfg.exponents.empty() ? std::vector<double>{2.0} : cfg.exponents;
  const double lo = cfg.grid_min.value_or(-1.0);
  const double hi = cfg.grid_max.value_or(1.0);

  CommandResult out;
  out.report = {{"command", "contour"},
                {"config",
                 {{"space", std::string(to_string(space))},
                  {"exponents", exponents},
                  {"grid_min", lo},
                  {"grid_max", hi},
                  {"steps", cfg.steps}}},
                {"grids", json::array()}};
  std::ostringstream csv;
  csv << config_comment(out.report["config"]);
  csv << "space,exponent,x1,x2,value\n";
  for (double e : exponents) {
    const auto grid = contour_grid(space, e, lo, hi, cfg.steps);
    json values = json::array();
    for (const GridPoint& g : grid) {
      csv << to_string(space) << ',' << format_number(e) << ',' << format_number(g.x1) << ','
          << format_number(g.x2) << ',' << format_number(g.value) << '\n';
      values.push_back(std::isnan(g.value) ? json(nullptr) : json(g.value));
    }
    out.report["grids"].push_back({{"exponent", e}, {"values", values}});
  }
  out.csv = csv.str();
  return out;
}

CommandResult cmd_boundary(const RunConfig& cfg) {
  if (cfg.model.empty()) throw Error(ErrorCategory::usage_error, "boundary needs --model");
  const StretchyModel model = load_model(cfg.model);
  if (model.basis.dim() != 2) {
    throw Error(ErrorCategory::dimension_mismatch,
                "decision boundaries need a 2-D input model, got d = " +
                    std::to_string(model.basis.dim()));
  }
  const double lo = cfg.grid_min.value_or(0.0);
  const double hi = cfg.grid_max.value_or(0.3);
  if (cfg.steps < 2 || !(lo < hi)) {
    throw Error(ErrorCategory::invalid_argument, "boundary grid needs steps >= 2 and min < max");
  }
  const auto n = static_cast<Eigen::Index>(cfg.steps);
  const double h = (hi - lo) / static_cast<double>(cfg.steps - 1);
  Matrix pts(n * n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      pts(i * n + j, 0) = i + 1 == n ? hi : lo + h * static_cast<double>(i);
      pts(i * n + j, 1) = j + 1 == n ? hi : lo + h * static_cast<double>(j);
    }
  }
  const Vector g = predict(model, pts);
  const std::vector<int> cls = classify(g, ClassifierConfig{cfg.tau, -1, 1});

  CommandResult out;
  out.report = {{"command", "boundary"},
                {"config", {{"model", cfg.model}, {"tau", cfg.tau}, {"grid_min", lo},
                            {"grid_max", hi}, {"steps", cfg.steps}}}};
  std::ostringstream csv;
  csv << config_comment(out.report["config"]);
  csv << "x1,x2,g,class\n";
  json points = json::array();
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    const int c = cls[static_cast<std::size_t>(k)];
    csv << format_number(pts(k, 0)) << ',' << format_number(pts(k, 1)) << ','
        << format_number(g[k]) << ',' << c << '\n';
    points.push_back({pts(k, 0), pts(k, 1), g[k], c});
  }
  out.report["points"] = points;
  out.csv = csv.str();
  return out;
}

}  // namespace stretchy::cli
