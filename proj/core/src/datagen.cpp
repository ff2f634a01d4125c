#include "hinfraud/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "hinfraud/error.hpp"
#include "hinfraud/rng.hpp"

namespace hinfraud {

void GenConfig::validate() const {
  const std::uint32_t counts[] = {transactions, users,   billings,  ips,       items,
                                  titles,       sources, countries, currencies, account_types};
  for (const auto c : counts) {
    if (c < 1) raise(ErrorKind::config_invalid, "all node counts must be >= 1");
  }
  const std::uint32_t attrs[] = {users,   billings,  ips,        items,        titles,
                                 sources, countries, currencies, account_types};
  for (const auto c : attrs) {
    if (c >= transactions) {
      raise(ErrorKind::config_invalid,
            "transaction count must exceed every attribute count so downsized paths exist");
    }
  }
  const double probs[] = {fraud_base_rate, risky_billing_fraction, risky_ip_fraction,
                          ring_fraud_probability};
  for (const auto p : probs) {
    if (!(p >= 0.0) || !(p <= 1.0)) raise(ErrorKind::config_invalid, "probabilities must lie in [0, 1]");
  }
  if (feature_dim < 1) raise(ErrorKind::config_invalid, "feature_dim must be >= 1");
  if (items_per_transaction_max < 1 || items_per_transaction_max > items) {
    raise(ErrorKind::config_invalid, "items_per_transaction_max must lie in [1, items]");
  }
  if (timestamp_span_seconds < 1) raise(ErrorKind::config_invalid, "timestamp span must be >= 1");
  if (!(feature_snr >= 0.0)) raise(ErrorKind::config_invalid, "feature_snr must be >= 0");
}

HinSchema example_schema() {
  std::vector<NodeTypeDecl> nodes{
      {"transaction", true}, {"user", false},    {"billing", false},
      {"ip", false},         {"item", false},    {"title", false},
      {"currency", false},   {"source", false},  {"country", false},
      {"account_type", false},
  };
  std::vector<LinkTypeDecl> links{
      {"byUser", "transaction", "user", Cardinality::many_to_one},
      {"byBilling", "transaction", "billing", Cardinality::many_to_one},
      {"tranIP", "transaction", "ip", Cardinality::many_to_one},
      {"containsItem", "transaction", "item", Cardinality::many_to_many},
      {"fromSource", "transaction", "source", Cardinality::many_to_one},
      {"inCurrency", "transaction", "currency", Cardinality::many_to_one},
      {"isTitle", "item", "title", Cardinality::many_to_one},
      {"userCountry", "user", "country", Cardinality::many_to_one},
      {"billingIP", "billing", "ip", Cardinality::many_to_one},
      {"billingCountry", "billing", "country", Cardinality::many_to_one},
      {"binCountry", "billing", "country", Cardinality::many_to_one},
      {"accountType", "billing", "account_type", Cardinality::many_to_one},
  };
  return HinSchema(std::move(nodes), std::move(links));
}

namespace {

// Zipf over ranks 1..k with exponent s; s == 0 degenerates to uniform.
class ZipfSampler {
 public:
  ZipfSampler(std::uint32_t k, double exponent) : cumulative_(k) {
    double total = 0.0;
    for (std::uint32_t r = 0; r < k; ++r) {
      total += std::pow(static_cast<double>(r + 1), -exponent);
      cumulative_[r] = total;
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::uint32_t draw(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }

 private:
  std::vector<double> cumulative_;
};

std::vector<std::uint8_t> pick_risky(std::uint32_t count, double fraction, Rng& rng) {
  std::vector<std::uint8_t> risky(count, 0);
  const auto target = static_cast<std::uint32_t>(std::floor(fraction * count));
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  for (std::uint32_t k = 0; k < target; ++k) {
    const auto pick = k + rng.next_below(count - k);
    std::swap(order[k], order[pick]);
    risky[order[k]] = 1;
  }
  return risky;
}

class FileWriter {
 public:
  explicit FileWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) raise(ErrorKind::io_error, "cannot write " + path.string());
  }
  void line(const std::string& text) { out_ << text << '\n'; }
  std::ofstream& stream() { return out_; }
  ~FileWriter() = default;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string fmt_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

}  // namespace

GenSummary generate(const GenConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const HinSchema schema = example_schema();

  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "nodes");
  fs::create_directories(out_dir / "edges");

  {
    FileWriter schema_file(out_dir / "schema.json");
    schema_file.stream() << schema.to_json_text();
  }
  {
    FileWriter config_file(out_dir / "gen_config.json");
    config_file.stream() << config.to_json_text();
  }

  const std::uint32_t n = config.transactions;

  struct AttributeType {
    const char* type_name;
    const char* id_prefix;
    std::uint32_t count;
  };
  const std::vector<AttributeType> attribute_types{
      {"user", "u", config.users},
      {"billing", "b", config.billings},
      {"ip", "ip", config.ips},
      {"item", "it", config.items},
      {"title", "ti", config.titles},
      {"currency", "c", config.currencies},
      {"source", "s", config.sources},
      {"country", "co", config.countries},
      {"account_type", "at", config.account_types},
  };

  {
    FileWriter nodes(out_dir / "nodes" / "transaction.txt");
    for (std::uint32_t i = 0; i < n; ++i) nodes.line("t" + std::to_string(i));
  }
  for (const auto& attr : attribute_types) {
    FileWriter nodes(out_dir / "nodes" / (std::string(attr.type_name) + ".txt"));
    for (std::uint32_t i = 0; i < attr.count; ++i) {
      nodes.line(std::string(attr.id_prefix) + std::to_string(i));
    }
  }

  // --- transaction-rooted many-to-one attributes ---
  const auto draw_column = [&](const char* stream, std::uint32_t count, double exponent) {
    Rng rng(derive_seed(config.seed, stream));
    const ZipfSampler sampler(count, exponent);
    std::vector<std::uint32_t> column(n);
    for (std::uint32_t i = 0; i < n; ++i) column[i] = sampler.draw(rng);
    return column;
  };

  const auto txn_user = draw_column("attr.byUser", config.users, config.zipf_user);
  const auto txn_billing = draw_column("attr.byBilling", config.billings, config.zipf_billing);
  const auto txn_ip = draw_column("attr.tranIP", config.ips, config.zipf_ip);
  const auto txn_source = draw_column("attr.fromSource", config.sources, config.zipf_source);
  const auto txn_currency = draw_column("attr.inCurrency", config.currencies, config.zipf_currency);

  const auto write_txn_edges = [&](const char* link, const char* prefix,
                                   const std::vector<std::uint32_t>& column) {
    FileWriter edges(out_dir / "edges" / (std::string(link) + ".csv"));
    for (std::uint32_t i = 0; i < n; ++i) {
      edges.line("t" + std::to_string(i) + "," + prefix + std::to_string(column[i]));
    }
  };
  write_txn_edges("byUser", "u", txn_user);
  write_txn_edges("byBilling", "b", txn_billing);
  write_txn_edges("tranIP", "ip", txn_ip);
  write_txn_edges("fromSource", "s", txn_source);
  write_txn_edges("inCurrency", "c", txn_currency);

  // --- items: 1..max distinct items per transaction (many-to-many) ---
  {
    Rng rng(derive_seed(config.seed, "attr.containsItem"));
    const ZipfSampler sampler(config.items, config.zipf_item);
    FileWriter edges(out_dir / "edges" / "containsItem.csv");
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto want = 1 + static_cast<std::uint32_t>(rng.next_below(config.items_per_transaction_max));
      std::vector<std::uint32_t> chosen;
      while (chosen.size() < want) {
        const auto item = sampler.draw(rng);
        if (std::find(chosen.begin(), chosen.end(), item) == chosen.end()) chosen.push_back(item);
      }
      std::sort(chosen.begin(), chosen.end());
      for (const auto item : chosen) {
        edges.line("t" + std::to_string(i) + ",it" + std::to_string(item));
      }
    }
  }

  // --- attribute-to-attribute many-to-one links ---
  const auto write_attr_edges = [&](const char* link, const char* src_prefix, std::uint32_t src_count,
                                    const char* dst_prefix, std::uint32_t dst_count, double exponent) {
    Rng rng(derive_seed(config.seed, std::string("attr.") + link));
    const ZipfSampler sampler(dst_count, exponent);
    FileWriter edges(out_dir / "edges" / (std::string(link) + ".csv"));
    for (std::uint32_t i = 0; i < src_count; ++i) {
      edges.line(std::string(src_prefix) + std::to_string(i) + "," + dst_prefix +
                 std::to_string(sampler.draw(rng)));
    }
  };
  write_attr_edges("isTitle", "it", config.items, "ti", config.titles, config.zipf_title);
  write_attr_edges("userCountry", "u", config.users, "co", config.countries, config.zipf_country);
  write_attr_edges("billingIP", "b", config.billings, "ip", config.ips, config.zipf_ip);
  write_attr_edges("billingCountry", "b", config.billings, "co", config.countries, config.zipf_country);
  write_attr_edges("binCountry", "b", config.billings, "co", config.countries, config.zipf_country);
  write_attr_edges("accountType", "b", config.billings, "at", config.account_types,
                   config.zipf_account_type);

  // --- planted rings and labels ---
  Rng risky_rng(derive_seed(config.seed, "risky"));
  const auto risky_billing = pick_risky(config.billings, config.risky_billing_fraction, risky_rng);
  const auto risky_ip = pick_risky(config.ips, config.risky_ip_fraction, risky_rng);

  Rng label_rng(derive_seed(config.seed, "labels"));
  Rng ts_rng(derive_seed(config.seed, "timestamps"));
  std::vector<std::uint8_t> labels(n, 0);
  std::vector<std::int64_t> timestamps(n, 0);
  std::uint32_t fraud_count = 0;
  std::uint32_t risky_count = 0;
  std::uint32_t fraud_in_risky = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool risky = risky_billing[txn_billing[i]] != 0 || risky_ip[txn_ip[i]] != 0;
    risky_count += risky;
    const double p = risky ? config.ring_fraud_probability : config.fraud_base_rate;
    labels[i] = label_rng.next_bernoulli(p) ? 1 : 0;
    fraud_count += labels[i];
    fraud_in_risky += risky && labels[i] != 0;
    timestamps[i] =
        config.timestamp_start + static_cast<std::int64_t>(ts_rng.next_below(
                                     static_cast<std::uint64_t>(config.timestamp_span_seconds)));
  }
  {
    FileWriter labels_file(out_dir / "labels.csv");
    labels_file.line("transaction_id,label,timestamp");
    for (std::uint32_t i = 0; i < n; ++i) {
      labels_file.line("t" + std::to_string(i) + "," + std::to_string(static_cast<int>(labels[i])) +
                       "," + std::to_string(timestamps[i]));
    }
  }

  // --- base features: class-conditional Gaussians with overlap ---
  {
    Rng feature_rng(derive_seed(config.seed, "features"));
    const std::uint32_t informative = std::max<std::uint32_t>(1, config.feature_dim / 2);
    FileWriter features(out_dir / "features.csv");
    std::string header = "txn_id";
    for (std::uint32_t j = 0; j < config.feature_dim; ++j) header += ",x_" + std::to_string(j);
    features.line(header);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::string row = "t" + std::to_string(i);
      for (std::uint32_t j = 0; j < config.feature_dim; ++j) {
        const double shift = (j < informative && labels[i] != 0) ? config.feature_snr : 0.0;
        row += "," + fmt_double(shift + feature_rng.next_gaussian());
      }
      features.line(row);
    }
  }

  GenSummary summary;
  summary.transactions = n;
  summary.fraud_count = fraud_count;
  summary.risky_transaction_count = risky_count;
  summary.fraud_in_risky_count = fraud_in_risky;
  const double risky_share = static_cast<double>(risky_count) / static_cast<double>(n);
  summary.expected_fraud_rate = risky_share * config.ring_fraud_probability +
                                (1.0 - risky_share) * config.fraud_base_rate;
  return summary;
}

// ---- config (de)serialization ----

std::string GenConfig::to_json_text() const {
  nlohmann::json j;
  j["transactions"] = transactions;
  j["node_counts"] = {{"user", users},         {"billing", billings}, {"ip", ips},
                      {"item", items},         {"title", titles},     {"currency", currencies},
                      {"source", sources},     {"country", countries},
                      {"account_type", account_types}};
  j["zipf"] = {{"user", zipf_user},         {"billing", zipf_billing}, {"ip", zipf_ip},
               {"item", zipf_item},         {"title", zipf_title},     {"currency", zipf_currency},
               {"source", zipf_source},     {"country", zipf_country},
               {"account_type", zipf_account_type}};
  j["fraud_base_rate"] = fraud_base_rate;
  j["risky_billing_fraction"] = risky_billing_fraction;
  j["risky_ip_fraction"] = risky_ip_fraction;
  j["ring_fraud_probability"] = ring_fraud_probability;
  j["feature_dim"] = feature_dim;
  j["feature_snr"] = feature_snr;
  j["items_per_transaction_max"] = items_per_transaction_max;
  j["timestamp_start"] = timestamp_start;
  j["timestamp_span_seconds"] = timestamp_span_seconds;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

GenConfig GenConfig::from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorKind::parse_error, "generator config is not valid JSON");
  GenConfig c;
  try {
    c.transactions = j.value("transactions", c.transactions);
    if (j.contains("node_counts")) {
      const auto& counts = j.at("node_counts");
      c.users = counts.value("user", c.users);
      c.billings = counts.value("billing", c.billings);
      c.ips = counts.value("ip", c.ips);
      c.items = counts.value("item", c.items);
      c.titles = counts.value("title", c.titles);
      c.currencies = counts.value("currency", c.currencies);
      c.sources = counts.value("source", c.sources);
      c.countries = counts.value("country", c.countries);
      c.account_types = counts.value("account_type", c.account_types);
    }
    if (j.contains("zipf")) {
      const auto& zipf = j.at("zipf");
      c.zipf_user = zipf.value("user", c.zipf_user);
      c.zipf_billing = zipf.value("billing", c.zipf_billing);
      c.zipf_ip = zipf.value("ip", c.zipf_ip);
      c.zipf_item = zipf.value("item", c.zipf_item);
      c.zipf_title = zipf.value("title", c.zipf_title);
      c.zipf_currency = zipf.value("currency", c.zipf_currency);
      c.zipf_source = zipf.value("source", c.zipf_source);
      c.zipf_country = zipf.value("country", c.zipf_country);
      c.zipf_account_type = zipf.value("account_type", c.zipf_account_type);
    }
    c.fraud_base_rate = j.value("fraud_base_rate", c.fraud_base_rate);
    c.risky_billing_fraction = j.value("risky_billing_fraction", c.risky_billing_fraction);
    c.risky_ip_fraction = j.value("risky_ip_fraction", c.risky_ip_fraction);
    c.ring_fraud_probability = j.value("ring_fraud_probability", c.ring_fraud_probability);
    c.feature_dim = j.value("feature_dim", c.feature_dim);
    c.feature_snr = j.value("feature_snr", c.feature_snr);
    c.items_per_transaction_max = j.value("items_per_transaction_max", c.items_per_transaction_max);
    c.timestamp_start = j.value("timestamp_start", c.timestamp_start);
    c.timestamp_span_seconds = j.value("timestamp_span_seconds", c.timestamp_span_seconds);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::parse_error, std::string("generator config: ") + e.what());
  }
  c.validate();
  return c;
}

GenConfig GenConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::io_error, "cannot open generator config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace hinfraud
