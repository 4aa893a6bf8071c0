#include "stretchy/model.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "stretchy/error.hpp"

namespace stretchy {

using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double sample_std(const Eigen::ArrayXd& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v - mean).square().sum() / static_cast<double>(v.size() - 1));
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCategory::validation_error, std::string("model document lacks '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::validation_error,
                std::string("model field '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

void StretchyModel::validate() const {
  solver.validate();
  if (static_cast<std::size_t>(alpha.size()) != basis.size()) {
    std::ostringstream os;
    os << "coefficient vector has " << alpha.size() << " entries but the basis has "
       << basis.size() << " terms";
    throw Error(ErrorCategory::validation_error, os.str());
  }
  if (!alpha.allFinite()) {
    throw Error(ErrorCategory::validation_error, "coefficient vector has non-finite entries");
  }
  if (transform) {
    const auto& t = *transform;
    if (t.columns() != basis.dim() || t.sigma.size() != basis.dim() || t.b.size() != basis.dim()) {
      throw Error(ErrorCategory::validation_error, "transform width does not match basis dimension");
    }
    for (double s : t.sigma) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw Error(ErrorCategory::validation_error, "transform sigma must be positive");
      }
    }
  }
}

FitResult fit(const Matrix& x_train, const Vector& y_train, const FitOptions& options) {
  options.solver.validate();
  if (x_train.rows() != y_train.size()) {
    throw Error(ErrorCategory::dimension_mismatch, "feature rows and target length differ");
  }
  if (x_train.rows() == 0) {
    throw Error(ErrorCategory::invalid_argument, "no training rows");
  }
  FitResult out;
  StretchyModel& model = out.model;
  model.basis = enumerate_basis(static_cast<std::size_t>(x_train.cols()), options.order);
  model.solver = options.solver;
  if (options.transform) {
    const auto& ts = *options.transform;
    model.transform = fit_transform(x_train, ts.a, ts.b_mode, ts.custom_b);
  }
  const DesignMatrix p = design_matrix(model, x_train);
  out.terms = p.cols();
  out.solution = solve(p, y_train, options.solver);
  model.alpha = out.solution.alpha;
  model.provenance = {options.dataset_id, static_cast<std::size_t>(x_train.rows()), utc_timestamp()};
  return out;
}

DesignMatrix design_matrix(const StretchyModel& model, const Matrix& x_raw) {
  if (static_cast<std::size_t>(x_raw.cols()) != model.basis.dim()) {
    std::ostringstream os;
    os << "input has " << x_raw.cols() << " features but the model expects "
       << model.basis.dim();
    throw Error(ErrorCategory::dimension_mismatch, os.str());
  }
  if (model.transform) return expand(apply_transform(x_raw, *model.transform), model.basis);
  return expand(x_raw, model.basis);
}

Vector predict(const StretchyModel& model, const Matrix& x_raw) {
  return design_matrix(model, x_raw).values * model.alpha;
}

std::vector<int> classify(const Vector& scores, const ClassifierConfig& cfg) {
  if (cfg.below == cfg.at_or_above) {
    throw Error(ErrorCategory::invalid_argument, "classifier labels must be distinct");
  }
  std::vector<int> labels(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = scores[i] >= cfg.tau ? cfg.at_or_above : cfg.below;
  }
  return labels;
}

EvalReport evaluate_predictions(const Vector& predicted, const Vector& target) {
  if (predicted.size() != target.size()) {
    throw Error(ErrorCategory::dimension_mismatch, "prediction and target lengths differ");
  }
  if (target.size() == 0) {
    throw Error(ErrorCategory::invalid_argument, "cannot evaluate on an empty set");
  }
  EvalReport r;
  r.n = static_cast<std::size_t>(target.size());
  r.residuals = predicted - target;
  const Eigen::ArrayXd sq = r.residuals.array().square();
  r.mse = sq.mean();
  r.std_err = sample_std(sq) / std::sqrt(static_cast<double>(r.n));
  r.residual_std = sample_std(r.residuals.array());
  return r;
}

EvalReport evaluate(const StretchyModel& model, const Matrix& x_raw, const Vector& y,
                    double sparsity_eps) {
  if (x_raw.rows() == 0) {
    throw Error(ErrorCategory::invalid_argument, "cannot evaluate on an empty set");
  }
  EvalReport r = evaluate_predictions(predict(model, x_raw), y);
  r.nnz = count_nonzero(model.alpha, sparsity_eps);
  return r;
}

std::size_t count_nonzero(const Vector& alpha, double eps) {
  return static_cast<std::size_t>((alpha.array().abs() > eps).count());
}

std::string model_to_json(const StretchyModel& model) {
  model.validate();
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  if (model.transform) {
    const auto& t = *model.transform;
    doc["transform"] = {{"mu", t.mu}, {"sigma", t.sigma}, {"a", t.a},
                        {"b", t.b}, {"b_mode", std::string(to_string(t.b_mode))}};
  } else {
    doc["transform"] = nullptr;
  }
  doc["basis"] = {{"d", model.basis.dim()}, {"r", model.basis.order()}, {"ordering", "graded_lex"}};
  doc["solver"] = {{"q", model.solver.q},
                   {"lambda", model.solver.lambda},
                   {"mode", std::string(to_string(model.solver.mode))}};
  doc["alpha"] = std::vector<double>(model.alpha.begin(), model.alpha.end());
  doc["provenance"] = {{"dataset_id", model.provenance.dataset_id},
                       {"m", model.provenance.m},
                       {"timestamp", model.provenance.timestamp}};
  return doc.dump(2) + "\n";
}

StretchyModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::parse_error, std::string("malformed model document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCategory::parse_error, "model document is not a JSON object");
  }
  const int version = require<int>(doc, "schema_version");
  if (version != kModelSchemaVersion) {
    std::ostringstream os;
    os << "unsupported model schema version " << version << " (expected "
       << kModelSchemaVersion << ")";
    throw Error(ErrorCategory::validation_error, os.str());
  }

  StretchyModel m;
  const json basis = require<json>(doc, "basis");
  if (require<std::string>(basis, "ordering") != "graded_lex") {
    throw Error(ErrorCategory::validation_error, "unsupported basis ordering");
  }
  const auto d = require<std::size_t>(basis, "d");
  if (d < 1) throw Error(ErrorCategory::validation_error, "basis dimension must be >= 1");
  m.basis = enumerate_basis(d, require<std::size_t>(basis, "r"));

  const json solver = require<json>(doc, "solver");
  m.solver.q = require<double>(solver, "q");
  m.solver.lambda = require<double>(solver, "lambda");
  try {
    m.solver.mode = parse_solve_mode(require<std::string>(solver, "mode"));
  } catch (const Error& e) {
    throw Error(ErrorCategory::validation_error, e.what());
  }

  const json transform = require<json>(doc, "transform");
  if (!transform.is_null()) {
    TransformParams t;
    t.mu = require<std::vector<double>>(transform, "mu");
    t.sigma = require<std::vector<double>>(transform, "sigma");
    t.a = require<double>(transform, "a");
    t.b = require<std::vector<double>>(transform, "b");
    try {
      t.b_mode = parse_b_mode(require<std::string>(transform, "b_mode"));
    } catch (const Error& e) {
      throw Error(ErrorCategory::validation_error, e.what());
    }
    m.transform = std::move(t);
  }

  const auto alpha = require<std::vector<double>>(doc, "alpha");
  m.alpha = Eigen::Map<const Vector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));

  if (doc.contains("provenance") && doc["provenance"].is_object()) {
    const json& p = doc["provenance"];
    m.provenance.dataset_id = p.value("dataset_id", "");
    m.provenance.m = p.value("m", std::size_t{0});
    m.provenance.timestamp = p.value("timestamp", "");
  }
  m.validate();
  return m;
}

void save_model(const StretchyModel& model, const std::filesystem::path& path) {
  const std::string text = model_to_json(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io_error, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCategory::io_error, "failed writing '" + path.string() + "'");
}

StretchyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io_error, "cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace stretchy
