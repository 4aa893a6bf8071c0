#include "stretchy/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

#include "stretchy/error.hpp"

#ifndef STRETCHY_SOURCE_DIR
#define STRETCHY_SOURCE_DIR "."
#endif

namespace stretchy {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    std::ostringstream os;
    os << "row " << row << ", column '" << column << "': '" << cell << "' is not a finite number";
    throw Error(ErrorCategory::parse_error, os.str());
  }
  return v;
}

Dataset take_rows(const Dataset& data, SplitFlag flag) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < data.split->size(); ++i) {
    if ((*data.split)[i] == flag) idx.push_back(static_cast<Eigen::Index>(i));
  }
  Dataset out;
  out.id = data.id + (flag == SplitFlag::train ? ":train" : ":test");
  out.feature_names = data.feature_names;
  out.x.resize(static_cast<Eigen::Index>(idx.size()), data.x.cols());
  out.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.x.row(kk) = data.x.row(idx[k]);
    out.y[kk] = data.y[idx[k]];
  }
  out.split = std::vector<SplitFlag>(idx.size(), flag);
  return out;
}

}  // namespace

Dataset parse_delimited(const std::string& text, const LoadOptions& options, const std::string& id) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_fields(line, options.delimiter);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCategory::parse_error, "missing header row");

  const std::size_t first_col = header.front().empty() ? 1 : 0;
  auto find_column = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = first_col; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw Error(ErrorCategory::parse_error, "column '" + name + "' not found in header");
  };
  const std::size_t target = find_column(options.target_column);
  std::optional<std::size_t> split_col;
  if (options.split_column) split_col = find_column(*options.split_column);

  Dataset data;
  data.id = id;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = first_col; c < header.size(); ++c) {
    if (c == target || (split_col && c == *split_col)) continue;
    if (header[c].empty()) {
      std::ostringstream os;
      os << "header column " << c << " has no name";
      throw Error(ErrorCategory::parse_error, os.str());
    }
    feature_cols.push_back(c);
    data.feature_names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<double> targets;
  std::vector<SplitFlag> flags;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, options.delimiter);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "line " << line_no << " has " << fields.size() << " fields, header has "
         << header.size();
      throw Error(ErrorCategory::parse_error, os.str());
    }
    for (std::size_t c : feature_cols) values.push_back(parse_number(fields[c], row, header[c]));
    targets.push_back(parse_number(fields[target], row, header[target]));
    if (split_col) {
      flags.push_back(fields[*split_col] == options.split_train_value ? SplitFlag::train
                                                                     : SplitFlag::test);
    }
    ++row;
  }

  const auto m = static_cast<Eigen::Index>(row);
  const auto d = static_cast<Eigen::Index>(feature_cols.size());
  data.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), m, d);
  data.y = Eigen::Map<const Vector>(targets.data(), m);
  if (split_col) data.split = std::move(flags);
  return data;
}

Dataset load_delimited(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io_error, "cannot open data file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_delimited(buf.str(), options, path.filename().string());
}

Dataset synthetic_three_points() {
  Dataset data;
  data.id = "synthetic_three_points";
  data.feature_names = {"x1", "x2"};
  data.x.resize(3, 2);
  data.x << 0.1, 0.1,
            0.1, 0.2,
            0.2, 0.1;
  data.y.resize(3);
  data.y << -1.0, 1.0, 1.0;
  return data;
}

std::pair<Dataset, Dataset> split(const Dataset& data) {
  if (data.rows() == 0) throw Error(ErrorCategory::invalid_argument, "cannot split an empty dataset");
  if (!data.split || data.split->size() != data.rows()) {
    throw Error(ErrorCategory::invalid_argument, "dataset '" + data.id + "' has no split flags");
  }
  return {take_rows(data, SplitFlag::train), take_rows(data, SplitFlag::test)};
}

std::optional<std::filesystem::path> find_prostate_data() {
  namespace fs = std::filesystem;
  if (const char* env = std::getenv("STRETCHY_PROSTATE_DATA"); env && *env) {
    if (fs::is_regular_file(env)) return fs::path(env);
    return std::nullopt;
  }
  const fs::path p = fs::path(STRETCHY_SOURCE_DIR) / "data" / "prostate.data";
  if (fs::is_regular_file(p)) return p;
  return std::nullopt;
}

}  // namespace stretchy
