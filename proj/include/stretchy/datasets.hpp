#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stretchy/polybasis.hpp"

namespace stretchy {

enum class SplitFlag { train, test };

struct Dataset {
  std::string id;
  std::vector<std::string> feature_names;
  Matrix x;
  Vector y;
  std::optional<std::vector<SplitFlag>> split;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(x.rows()); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(x.cols()); }
};

struct LoadOptions {
  char delimiter = '\t';
  std::string target_column = "lpsa";
  std::optional<std::string> split_column = std::string("train");
  std::string split_train_value = "T";
};

/// Reads a delimited text file with a header row. Every column other than
/// the target and split columns becomes a feature; an unnamed leading
/// column is treated as a row index and skipped.
Dataset load_delimited(const std::filesystem::path& path, const LoadOptions& options = {});
Dataset parse_delimited(const std::string& text, const LoadOptions& options = {},
                        const std::string& id = "inline");

/// Three first-quadrant points: (0.1, 0.1) -> -1, (0.1, 0.2) -> +1,
/// (0.2, 0.1) -> +1.
Dataset synthetic_three_points();

/// Partitions by split flag, keeping row order within each part.
std::pair<Dataset, Dataset> split(const Dataset& data);

/// Location of the prostate data: $STRETCHY_PROSTATE_DATA if set, otherwise
/// data/prostate.data under the source tree. nullopt when the file is absent.
std::optional<std::filesystem::path> find_prostate_data();

}  // namespace stretchy
