#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "hinfraud/schema.hpp"

namespace hinfraud {

// Synthetic transaction-network generator with planted fraud rings:
// transactions touching a risky billing account or IP address are fraudulent
// with ring_fraud_probability, everything else with fraud_base_rate. Output
// is byte-identical for a given config.
struct GenConfig {
  std::uint32_t transactions = 20000;

  std::uint32_t users = 4000;
  std::uint32_t billings = 500;
  std::uint32_t ips = 800;
  std::uint32_t items = 300;
  std::uint32_t titles = 60;
  std::uint32_t currencies = 15;
  std::uint32_t sources = 10;
  std::uint32_t countries = 20;
  std::uint32_t account_types = 5;

  // Zipf exponent of the attachment distribution, per attribute. 0 is
  // uniform; larger skews popularity harder.
  double zipf_user = 0.8;
  double zipf_billing = 1.1;
  double zipf_ip = 1.1;
  double zipf_item = 1.0;
  double zipf_title = 1.0;
  double zipf_currency = 0.8;
  double zipf_source = 0.0;
  double zipf_country = 0.6;
  double zipf_account_type = 0.3;

  double fraud_base_rate = 0.05;
  double risky_billing_fraction = 0.05;
  double risky_ip_fraction = 0.05;
  double ring_fraud_probability = 0.9;

  std::uint32_t feature_dim = 20;
  // Mean shift of the fraud class on informative feature dimensions, in
  // units of the (unit) noise sigma. Deliberately modest: the graph must
  // carry signal the base features do not.
  double feature_snr = 0.8;

  std::uint32_t items_per_transaction_max = 3;
  std::int64_t timestamp_start = 1600000000;
  std::int64_t timestamp_span_seconds = 4838400;  // 8 weeks

  std::uint64_t seed = 42;

  void validate() const;

  std::string to_json_text() const;
  static GenConfig from_json_text(std::string_view text);
  static GenConfig from_json_file(const std::filesystem::path& path);
};

// The example schema the generator emits: transaction plus user, billing,
// ip, item, title, currency, source, country and account_type attributes.
HinSchema example_schema();

struct GenSummary {
  std::uint32_t transactions = 0;
  std::uint32_t fraud_count = 0;
  std::uint32_t risky_transaction_count = 0;  // touching a risky billing or ip
  std::uint32_t fraud_in_risky_count = 0;
  double expected_fraud_rate = 0.0;  // risky-share-weighted analytic rate
};

// Writes schema.json, nodes/, edges/, features.csv, labels.csv and
// gen_config.json into out_dir.
GenSummary generate(const GenConfig& config, const std::filesystem::path& out_dir);

}  // namespace hinfraud
