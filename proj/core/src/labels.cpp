#include "hinfraud/labels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hinfraud/error.hpp"

namespace hinfraud {

LabelsFile load_labels(const std::filesystem::path& path, const NodeIndex& transactions) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::io_error, "cannot open labels file " + path.string());

  LabelsFile out;
  out.y.assign(transactions.size(), 0);
  out.timestamps.assign(transactions.size(), 0);
  std::vector<bool> seen(transactions.size(), false);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "transaction_id,label,timestamp") {
        raise(ErrorKind::parse_error,
              path.string() + ": expected header 'transaction_id,label,timestamp'");
      }
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      raise(ErrorKind::parse_error,
            path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto id = line.substr(0, c1);
    const auto label_text = line.substr(c1 + 1, c2 - c1 - 1);
    const auto ts_text = line.substr(c2 + 1);

    const auto index = transactions.index_of(id);
    if (!index) {
      raise(ErrorKind::unknown_node_id, "labels file references unknown transaction '" + id + "'");
    }
    if (seen[*index]) {
      raise(ErrorKind::parse_error, "transaction '" + id + "' labeled more than once");
    }
    seen[*index] = true;

    if (label_text == "0") {
      out.y[*index] = 0;
    } else if (label_text == "1") {
      out.y[*index] = 1;
    } else {
      raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) +
                                        ": label must be 0 or 1, got '" + label_text + "'");
    }
    try {
      out.timestamps[*index] = std::stoll(ts_text);
    } catch (const std::exception&) {
      raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) +
                                        ": bad timestamp '" + ts_text + "'");
    }
  }
  for (std::uint32_t i = 0; i < transactions.size(); ++i) {
    if (!seen[i]) {
      raise(ErrorKind::parse_error, "transaction '" + transactions.id_of(i) + "' has no label row");
    }
  }
  return out;
}

std::vector<std::uint32_t> LabelState::train_indices() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == Partition::train) out.push_back(i);
  }
  return out;
}

std::vector<std::uint32_t> LabelState::test_indices() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == Partition::test) out.push_back(i);
  }
  return out;
}

double LabelState::train_fraud_rate() const {
  std::size_t train_count = 0;
  std::size_t fraud_count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == Partition::train) {
      ++train_count;
      fraud_count += y[i];
    }
  }
  return train_count == 0 ? 0.0 : static_cast<double>(fraud_count) / static_cast<double>(train_count);
}

LabelState make_label_state(const LabelsFile& labels, double test_fraction) {
  const std::size_t n = labels.y.size();
  if (n == 0) raise(ErrorKind::config_invalid, "no labeled transactions");
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    raise(ErrorKind::config_invalid, "test fraction must lie in (0, 1)");
  }
  auto test_count = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));
  test_count = std::clamp<std::size_t>(test_count, 1, n - 1);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return labels.timestamps[a] < labels.timestamps[b];
  });

  LabelState state;
  state.y = labels.y;
  state.timestamps = labels.timestamps;
  state.mask.assign(n, Partition::train);
  for (std::size_t k = n - test_count; k < n; ++k) state.mask[order[k]] = Partition::test;
  return state;
}

LabelState make_label_state(const LabelsFile& labels, const std::vector<std::uint32_t>& train_idx,
                            const std::vector<std::uint32_t>& test_idx) {
  LabelState state;
  state.y = labels.y;
  state.timestamps = labels.timestamps;
  state.mask.assign(labels.y.size(), Partition::excluded);
  for (const auto i : train_idx) state.mask[i] = Partition::train;
  for (const auto i : test_idx) {
    if (state.mask[i] == Partition::train) {
      raise(ErrorKind::config_invalid, "transaction in both train and test masks");
    }
    state.mask[i] = Partition::test;
  }
  // labels of excluded transactions must not leak into feature aggregation
  for (std::size_t i = 0; i < state.mask.size(); ++i) {
    if (state.mask[i] == Partition::excluded) state.y[i] = 0;
  }
  return state;
}

}  // namespace hinfraud
