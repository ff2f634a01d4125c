#include "hinfraud/dataset.hpp"

#include <charconv>
#include <fstream>
#include <vector>

#include "hinfraud/error.hpp"

namespace hinfraud {

Matrix load_features(const std::filesystem::path& path, const NodeIndex& transactions) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::io_error, "cannot open features file " + path.string());

  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::parse_error, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t columns = 0;
  for (const char c : line) columns += c == ',';
  if (columns == 0 || line.substr(0, 7) != "txn_id,") {
    raise(ErrorKind::parse_error, path.string() + ": expected header 'txn_id,x_0,...'");
  }

  Matrix x(transactions.size(), columns);
  std::vector<bool> seen(transactions.size(), false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto first_comma = line.find(',');
    if (first_comma == std::string::npos) {
      raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) + ": no fields");
    }
    const auto id = line.substr(0, first_comma);
    const auto index = transactions.index_of(id);
    if (!index) {
      raise(ErrorKind::unknown_node_id, "features file references unknown transaction '" + id + "'");
    }
    if (seen[*index]) raise(ErrorKind::parse_error, "duplicate feature row for '" + id + "'");
    seen[*index] = true;

    std::size_t begin = first_comma + 1;
    for (std::size_t j = 0; j < columns; ++j) {
      const auto end = j + 1 < columns ? line.find(',', begin) : line.size();
      if (end == std::string::npos) {
        raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) +
                                          ": expected " + std::to_string(columns) + " values");
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + begin, line.data() + end, value);
      if (ec != std::errc() || ptr != line.data() + end) {
        raise(ErrorKind::parse_error, path.string() + ":" + std::to_string(line_no) +
                                          ": bad number '" + line.substr(begin, end - begin) + "'");
      }
      x(*index, j) = value;
      begin = end + 1;
    }
  }
  for (std::uint32_t i = 0; i < transactions.size(); ++i) {
    if (!seen[i]) {
      raise(ErrorKind::parse_error, "transaction '" + transactions.id_of(i) + "' has no feature row");
    }
  }
  return x;
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Hin hin = Hin::load_dir(dir);
  const auto& transactions = hin.nodes(hin.schema().target_type());
  Matrix features = load_features(dir / "features.csv", transactions);
  LabelsFile labels = load_labels(dir / "labels.csv", transactions);
  return Dataset{std::move(hin), std::move(features), std::move(labels)};
}

}  // namespace hinfraud
