#pragma once

#include <filesystem>

#include "hinfraud/hin.hpp"
#include "hinfraud/labels.hpp"
#include "hinfraud/matrix.hpp"

namespace hinfraud {

// A dataset directory: schema.json, nodes/, edges/, features.csv, labels.csv.
struct Dataset {
  Hin hin;
  Matrix features;
  LabelsFile labels;
};

Dataset load_dataset(const std::filesystem::path& dir);

// Reads `txn_id,x_0,...` rows (header required) in transaction index order.
Matrix load_features(const std::filesystem::path& path, const NodeIndex& transactions);

}  // namespace hinfraud
