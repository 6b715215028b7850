#include <gtest/gtest.h>
#include <zlib.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mcaux/errors.hpp"
#include "mcaux/harness/config.hpp"
#include "mcaux/harness/errors.hpp"
#include "mcaux/harness/experiment.hpp"
#include "mcaux/harness/mnist.hpp"

namespace fs = std::filesystem;
using namespace mcaux;
using namespace mcaux::harness;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mcaux_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the seconds column (index 5) and the ESS/s columns, which depend on
// wall time.
std::string without_timing(const std::string& csv, std::vector<int> drop) {
  std::stringstream in(csv), out;
  for (std::string line; std::getline(in, line);) {
    std::stringstream cells(line);
    int c = 0;
    for (std::string cell; std::getline(cells, cell, ','); ++c) {
      if (std::find(drop.begin(), drop.end(), c) == drop.end()) out << cell << ',';
    }
    out << '\n';
  }
  return out.str();
}

ExperimentConfig small_gaussian() {
  return parse_config(json{{"experiment", "gaussian"},
                           {"n", 500},
                           {"d", 2},
                           {"samplers", {"rwm", "poissonmh"}},
                           {"target_rates", {0.4}},
                           {"iterations", 2000},
                           {"replicates", 2},
                           {"seed", 3}});
}

void put_be32(std::string& s, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xff));
}

void write_gz(const fs::path& p, const std::string& bytes) {
  gzFile f = gzopen(p.string().c_str(), "wb");
  gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
  gzclose(f);
}

// Tiny 4x4 "digits": each image has a class-specific bright pixel.
void write_fake_mnist(const fs::path& dir, int per_digit_train, int per_digit_test) {
  const auto images = [](int per_digit) {
    std::string s, labels;
    put_be32(s, 0x803);
    put_be32(s, static_cast<std::uint32_t>(3 * per_digit));
    put_be32(s, 4);
    put_be32(s, 4);
    put_be32(labels, 0x801);
    put_be32(labels, static_cast<std::uint32_t>(3 * per_digit));
    for (int k = 0; k < 3 * per_digit; ++k) {
      const int digit = k % 3 == 0 ? 3 : (k % 3 == 1 ? 5 : 7);
      for (int px = 0; px < 16; ++px) {
        int v = (px * 13 + k * 7) % 50;
        if (px == digit) v = 250;
        s.push_back(static_cast<char>(v));
      }
      labels.push_back(static_cast<char>(digit));
    }
    return std::make_pair(s, labels);
  };
  const auto [train_x, train_y] = images(per_digit_train);
  const auto [test_x, test_y] = images(per_digit_test);
  write_gz(dir / "train-images-idx3-ubyte.gz", train_x);
  write_gz(dir / "train-labels-idx1-ubyte.gz", train_y);
  std::ofstream(dir / "t10k-images-idx3-ubyte", std::ios::binary) << test_x;
  std::ofstream(dir / "t10k-labels-idx1-ubyte", std::ios::binary) << test_y;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MCAUX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, DefaultsAreMaterialised) {
  const ExperimentConfig c = parse_config(json{{"samplers", {"rwm"}}});
  const json echo = to_json(c);
  for (const char* key : {"n", "d", "beta", "lambda", "chi", "target_rates", "burn_in", "seed",
                          "grad_clip", "sgld_batch", "record", "reference"}) {
    EXPECT_TRUE(echo.contains(key)) << key;
  }
  EXPECT_EQ(parse_config(echo).n, c.n);
  EXPECT_DOUBLE_EQ(c.burn_in, 0.1);
}

TEST(Config, LambdaRules) {
  const auto coef = parse_config(json{{"samplers", {"rwm"}}, {"lambda", {{"rule", "l2_coefficient"}, {"value", 0.01}}}});
  EXPECT_NEAR(coef.lambda.resolve(10.0), 1.0, 1e-15);
  const auto abs = parse_config(json{{"samplers", {"rwm"}}, {"lambda", 7.5}});
  EXPECT_DOUBLE_EQ(abs.lambda.resolve(10.0), 7.5);
}

TEST(Config, UnknownKeysAndBadTypesAreRejected) {
  EXPECT_THROW(parse_config(json{{"samplers", {"rwm"}}, {"itertions", 5}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"samplers", {"rwm"}}, {"n", "many"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"experiment", "weird"}, {"samplers", {"rwm"}}}), ConfigError);
}

TEST(Config, EmptySamplerListIsAConfigError) {
  EXPECT_THROW(validate(parse_config(json{{"samplers", json::array()}})), ConfigError);
  EXPECT_THROW(
      run_experiment(parse_config(json{{"experiment", "theory"}, {"samplers", json::array()}}),
                     scratch("empty")),
      ConfigError);
}

TEST(Config, OverridesParseJsonOrString) {
  json doc{{"samplers", {"rwm"}}};
  apply_override(doc, "iterations", "250");
  apply_override(doc, "record", "every:10");
  const auto c = parse_config(doc);
  EXPECT_EQ(c.iterations, 250u);
  EXPECT_EQ(c.record, "every:10");
}

TEST(Experiment, ZeroReplicatesGiveHeaderOnlyCsv) {
  auto c = small_gaussian();
  c.replicates = 0;
  c.iterations = 0;
  const auto dir = scratch("headers");
  const auto s = run_experiment(c, dir);
  std::string header;
  for (const auto& col : run_record_columns()) header += (header.empty() ? "" : ",") + col;
  EXPECT_EQ(slurp(s.runs_csv), header + "\n");
  EXPECT_EQ(s.runs, 0u);
}

TEST(Experiment, DeterministicModuloSeconds) {
  const auto c = small_gaussian();
  const auto a = run_experiment(c, scratch("det_a"));
  const auto b = run_experiment(c, scratch("det_b"));
  EXPECT_EQ(without_timing(slurp(a.runs_csv), {5}), without_timing(slurp(b.runs_csv), {5}));
  EXPECT_EQ(without_timing(slurp(a.ess_csv), {9, 15, 16, 17}),
            without_timing(slurp(b.ess_csv), {9, 15, 16, 17}));
}

TEST(Experiment, RecordsAreWellFormed) {
  const auto c = small_gaussian();
  const auto s = run_experiment(c, scratch("records"));
  std::ifstream in(s.runs_csv);
  std::string line;
  std::getline(in, line);
  std::map<std::string, double> last_seconds;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), run_record_columns().size());
    const std::string key = cells[1] + "/" + cells[2] + "/" + cells[3];
    const double sec = std::stod(cells[5]);
    if (last_seconds.count(key)) ASSERT_GE(sec, last_seconds[key]);
    last_seconds[key] = sec;
    ASSERT_TRUE(cells[6] == "0" || cells[6] == "1");
    ++rows;
  }
  EXPECT_EQ(last_seconds.size(), 4u);
  EXPECT_GT(rows, 40u);
  const json meta = json::parse(slurp(s.meta_json));
  EXPECT_EQ(meta["config"], to_json(parse_config(meta["config"])));
  EXPECT_DOUBLE_EQ(meta["burn_in"].get<double>(), 0.1);
}

TEST(Experiment, PromiseMismatchIsAConfigError) {
  auto c = small_gaussian();
  c.samplers = {"tunamh"};
  EXPECT_THROW(run_experiment(c, scratch("mismatch")), ConfigError);
  c.experiment = ExperimentKind::logistic;
  c.samplers = {"poissonmh"};
  EXPECT_THROW(run_experiment(c, scratch("mismatch2")), ConfigError);
}

TEST(Experiment, ExchangeToyRunsAgainstEnumeratedPosterior) {
  const auto c = parse_config(json{{"experiment", "exchange_toy"},
                                   {"samplers", {"exchange"}},
                                   {"iterations", 3000}});
  const auto s = run_experiment(c, scratch("exchange"));
  EXPECT_EQ(s.runs, 1u);
  EXPECT_EQ(s.aborted, 0u);
}

TEST(Experiment, TheoryRunsAndUnknownToyIsAConfigError) {
  const auto ok = parse_config(json{{"experiment", "theory"}, {"samplers", {"rwm", "exchange"}}});
  const auto s = run_experiment(ok, scratch("theory"));
  EXPECT_EQ(s.check_failures, 0u);
  EXPECT_GT(s.runs, 0u);
  const auto bad = parse_config(json{{"experiment", "theory"}, {"samplers", {"hmc"}}});
  EXPECT_THROW(run_experiment(bad, scratch("theory_bad")), ConfigError);
}

TEST(Experiment, LogisticHoldoutColumnIsFilled) {
  const auto c = parse_config(json{{"experiment", "logistic"},
                                   {"n", 400},
                                   {"d", 3},
                                   {"holdout", 200},
                                   {"samplers", {"tunamh", "tuna_sgld"}},
                                   {"target_rates", {0.4}},
                                   {"sgld_batch", 10},
                                   {"iterations", 1000}});
  const auto s = run_experiment(c, scratch("logistic"));
  const std::string csv = slurp(s.runs_csv);
  std::stringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line.find(",nan\n"), std::string::npos);
  EXPECT_NE(line.substr(line.rfind(',') + 1), "nan");
}

TEST(Pca, DiagonalCovariance) {
  Eigen::MatrixXd c = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const Eigen::MatrixXd v = pca_top_k(c, 2);
  EXPECT_NEAR(std::abs(v(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(v(1, 1)), 1.0, 1e-12);
}

TEST(Pca, RankOne) {
  const Eigen::Vector4d u(1, -2, 0.5, 3);
  const Eigen::MatrixXd v = pca_top_k(u * u.transpose(), 1);
  EXPECT_NEAR(std::abs(v.col(0).dot(u.normalized())), 1.0, 1e-10);
}

TEST(Pca, RandomSpdResiduals) {
  RngStream rng(4, 0);
  Eigen::MatrixXd a(10, 10);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  const Eigen::MatrixXd c = a * a.transpose();
  const Eigen::MatrixXd v = pca_top_k(c, 4);
  EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-8);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double lambda = v.col(k).dot(c * v.col(k));
    EXPECT_LT((c * v.col(k) - lambda * v.col(k)).norm(), 1e-8);
  }
}

TEST(Pca, RejectsAsymmetry) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 0.3, 0.2, 1;
  EXPECT_THROW(pca_top_k(c, 1), PreconditionError);
}

TEST(Mnist, IngestsFixtureAndCentres) {
  const auto dir = scratch("mnist_ok");
  write_fake_mnist(dir, 20, 5);
  const MnistPair m = ingest_mnist(dir, {3, 5}, 3);
  EXPECT_EQ(m.train_x.rows(), 40);
  EXPECT_EQ(m.test_x.rows(), 10);
  EXPECT_EQ(m.train_x.cols(), 3);
  // Projected training mean is the projection of the centred mean: zero.
  EXPECT_LT(m.train_x.colwise().mean().norm(), 1e-10);
  for (Eigen::Index i = 0; i < m.train_y.size(); ++i) {
    EXPECT_TRUE(m.train_y[i] == 0.0 || m.train_y[i] == 1.0);
  }
  EXPECT_DOUBLE_EQ(m.train_y[0], 0.0);
  EXPECT_DOUBLE_EQ(m.train_y[1], 1.0);
}

TEST(Mnist, MissingFilesNameTheExpectedFiles) {
  const auto dir = scratch("mnist_missing");
  try {
    ingest_mnist(dir, {3, 5}, 2);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("train-images-idx3-ubyte"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("t10k-labels-idx1-ubyte"), std::string::npos);
  }
}

TEST(Mnist, BadMagicAndTruncation) {
  const auto dir = scratch("mnist_bad");
  std::string bad;
  put_be32(bad, 0x804);
  put_be32(bad, 1);
  std::ofstream(dir / "bad", std::ios::binary) << bad;
  try {
    read_idx_images(dir / "bad");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 0"), std::string::npos);
  }
  std::string shortfile;
  put_be32(shortfile, 0x801);
  put_be32(shortfile, 10);
  shortfile += "abc";
  std::ofstream(dir / "short", std::ios::binary) << shortfile;
  try {
    read_idx_labels(dir / "short");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 11"), std::string::npos);
  }
}

TEST(Mnist, RealSplitCounts) {
  const char* dir = std::getenv("MCAUX_MNIST_DIR");
  if (!dir) GTEST_SKIP() << "set MCAUX_MNIST_DIR to the IDX files to run";
  const MnistPair a = ingest_mnist(dir, {3, 5}, 50);
  EXPECT_EQ(a.train_x.rows(), 11552);
  EXPECT_EQ(a.test_x.rows(), 1902);
  const MnistPair b = ingest_mnist(dir, {7, 9}, 50);
  EXPECT_EQ(b.train_x.rows(), 12214);
  EXPECT_EQ(b.test_x.rows(), 2037);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const auto cfg = dir / "ok.json";
  std::ofstream(cfg) << R"({"experiment":"gaussian","n":300,"d":2,"samplers":["rwm"],)"
                     << R"("target_rates":[0.4],"iterations":500})";
  const auto empty = dir / "empty.json";
  std::ofstream(empty) << R"({"samplers":[]})";
  const auto mnist = dir / "mnist.json";
  std::ofstream(mnist) << R"({"experiment":"logistic","data_source":"mnist","mnist_dir":")"
                       << (dir / "nowhere").string() << R"(","samplers":["tunamh"]})";
  EXPECT_EQ(run_cli("run " + cfg.string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "gaussian_runs.csv"));
  EXPECT_EQ(run_cli("run " + empty.string()), 1);
  EXPECT_EQ(run_cli("run " + cfg.string() + " --set nonsense=1"), 1);
  EXPECT_EQ(run_cli("run " + mnist.string() + " --out " + (dir / "out").string()), 2);
  EXPECT_EQ(run_cli("ingest-mnist --dir " + (dir / "nowhere").string()), 2);
  EXPECT_EQ(run_cli("theory"), 0);
}
