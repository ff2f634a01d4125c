#include <doctest.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef HINFRAUD_CLI_PATH
#error "HINFRAUD_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct CliDir {
  fs::path path;
  explicit CliDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hinfraud_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~CliDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& capture) {
  const std::string command =
      std::string(HINFRAUD_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string small_gen_config() {
  return R"({
    "transactions": 2000,
    "node_counts": {"user": 400, "billing": 60, "ip": 90, "item": 50, "title": 12,
                    "currency": 6, "source": 4, "country": 8, "account_type": 3},
    "feature_dim": 6,
    "seed": 7
  })";
}

}  // namespace

TEST_CASE("cli exit codes") {
  CliDir dir("codes");
  const auto log = dir.path / "out.txt";
  CHECK(run_cli("definitely-not-a-subcommand", log) == 1);
  CHECK(run_cli("--help", log) == 0);
  CHECK(run_cli("run --help", log) == 0);
  // missing dataset directory is a data error
  CHECK(run_cli("inspect-paths --data " + (dir.path / "nope").string(), log) == 2);
  // bad flag value is a usage error
  CHECK(run_cli("run --data x --classifier nonsense", log) == 1);
}

TEST_CASE("generate, run, and the predictions round trip") {
  CliDir dir("roundtrip");
  const auto log = dir.path / "out.txt";
  {
    std::ofstream cfg(dir.path / "gen.json");
    cfg << small_gen_config();
  }
  const auto data = (dir.path / "data").string();
  REQUIRE(run_cli("generate --config " + (dir.path / "gen.json").string() + " --out-dir " + data,
                  log) == 0);
  CHECK(fs::exists(dir.path / "data" / "schema.json"));
  CHECK(fs::exists(dir.path / "data" / "labels.csv"));
  CHECK(fs::exists(dir.path / "data" / "features.csv"));
  CHECK(fs::exists(dir.path / "data" / "nodes" / "transaction.txt"));
  CHECK(fs::exists(dir.path / "data" / "edges" / "byUser.csv"));

  const auto run_dir = (dir.path / "run").string();
  REQUIRE(run_cli("--seed 11 run --data " + data + " --out-dir " + run_dir +
                      " --classifier logistic_regression --epochs 40 --max-iters 3 --epsilon 0",
                  log) == 0);
  REQUIRE(fs::exists(dir.path / "run" / "report.txt"));
  REQUIRE(fs::exists(dir.path / "run" / "predictions.csv"));
  REQUIRE(fs::exists(dir.path / "run" / "history.csv"));

  // re-scoring the saved predictions reproduces the report's final metrics
  const auto score_log = dir.path / "score.txt";
  REQUIRE(run_cli("evaluate --data " + data + " --predictions " +
                      (dir.path / "run" / "predictions.csv").string(),
                  score_log) == 0);
  const auto scored = slurp(score_log);

  const auto report = slurp(dir.path / "run" / "report.txt");
  // the last iteration row carries the final metrics
  std::string last_row;
  std::istringstream lines(report);
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0])) != 0 &&
        line.find(',') != std::string::npos) {
      last_row = line;
    }
  }
  REQUIRE(!last_row.empty());
  // row: iter,label_change,recall,precision,f_score,accuracy,...
  std::vector<std::string> fields;
  {
    std::istringstream row(last_row);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
  }
  REQUIRE(fields.size() >= 6);
  for (int k = 2; k <= 5; ++k) {
    CHECK(scored.find(fields[k]) != std::string::npos);
  }
}

TEST_CASE("train then predict applies the saved model") {
  CliDir dir("model");
  const auto log = dir.path / "out.txt";
  {
    std::ofstream cfg(dir.path / "gen.json");
    cfg << small_gen_config();
  }
  const auto data = (dir.path / "data").string();
  REQUIRE(run_cli("generate --config " + (dir.path / "gen.json").string() + " --out-dir " + data,
                  log) == 0);
  const auto model = (dir.path / "model.json").string();
  REQUIRE(run_cli("--seed 3 train --data " + data + " --classifier logistic_regression" +
                      " --epochs 30 --model-out " + model,
                  log) == 0);
  CHECK(fs::exists(model));
  const auto preds = (dir.path / "preds.csv").string();
  REQUIRE(run_cli("predict --data " + data + " --model " + model + " --out " + preds, log) == 0);
  const auto content = slurp(preds);
  CHECK(content.rfind("txn_id,proba,label", 0) == 0);

  // scoring those predictions works too
  CHECK(run_cli("evaluate --data " + data + " --predictions " + preds, log) == 0);
}

TEST_CASE("dump-features writes the joined table and provenance sidecar") {
  CliDir dir("dump");
  const auto log = dir.path / "out.txt";
  {
    std::ofstream cfg(dir.path / "gen.json");
    cfg << small_gen_config();
  }
  const auto data = (dir.path / "data").string();
  REQUIRE(run_cli("generate --config " + (dir.path / "gen.json").string() + " --out-dir " + data,
                  log) == 0);
  const auto dump = (dir.path / "dump.csv").string();
  REQUIRE(run_cli("dump-features --data " + data + " --out " + dump, log) == 0);
  const auto content = slurp(dump);
  CHECK(content.rfind("txn_id,x_0", 0) == 0);
  CHECK(content.find(",z_0") != std::string::npos);
  const auto sidecar = slurp(dump + ".provenance.csv");
  CHECK(sidecar.rfind("z_col,left,right,end_type,semantics,duplicate_of", 0) == 0);
  CHECK(sidecar.find("transaction") != std::string::npos);
}

TEST_CASE("evaluate runs sliding windows and writes the significance study") {
  CliDir dir("eval");
  const auto log = dir.path / "out.txt";
  {
    std::ofstream cfg(dir.path / "gen.json");
    cfg << small_gen_config();
  }
  const auto data = (dir.path / "data").string();
  REQUIRE(run_cli("generate --config " + (dir.path / "gen.json").string() + " --out-dir " + data,
                  log) == 0);
  const auto out = (dir.path / "eval").string();
  REQUIRE(run_cli("--seed 5 evaluate --data " + data + " --out-dir " + out +
                      " --windows 2 --max-iters 2 --classifier logistic_regression --epochs 30",
                  log) == 0);
  const auto report = slurp(dir.path / "eval" / "eval_report.txt");
  CHECK(report.find("W1,baseline") != std::string::npos);
  CHECK(report.find("W1,collective") != std::string::npos);
  CHECK(report.find("W2,collective") != std::string::npos);
  const auto significance = slurp(dir.path / "eval" / "significance.csv");
  CHECK(significance.rfind("z_col,semantics,t,df,p,significant", 0) == 0);
}
