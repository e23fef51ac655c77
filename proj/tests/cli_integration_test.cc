#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gtest/gtest.h"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ucq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args, const std::string& env = "") {
    fs::path o = dir_ / "stdout.txt", e = dir_ / "stderr.txt";
    std::string cmd = env + " " + UCQ_CLI_PATH + " " + args + " > " + o.string() + " 2> " + e.string();
    int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path orthogonal_channel() {
    return write("orth.json", R"({"d": 2, "k": 2, "matrices": [
      [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
      [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]})");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, decompose_two_qubits) {
  auto r = run("decompose --n 2 --d 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"(2,0)\",3,1,3,0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"(1,1)\",1,1,1,0"), std::string::npos) << r.out;
}

TEST_F(CliTest, decompose_single_factor_json) {
  auto r = run("decompose --n 1 --d 5 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["components"].size(), 1u);
  EXPECT_EQ(doc["components"][0]["dim_u"], 5);
}

TEST_F(CliTest, capacity_exit_code) {
  auto r = run("decompose --n 8 --d 3");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
  EXPECT_EQ(run("decompose --n 5 --d 2", "UCQ_DIM_CAP=16").code, 2);
  EXPECT_EQ(run("decompose --n 4 --d 2", "UCQ_DIM_CAP=16").code, 0);
  EXPECT_EQ(run("decompose --n 2 --d 2", "UCQ_DIM_CAP=abc").code, 4);
}

TEST_F(CliTest, codebook_is_deterministic) {
  auto a = dir_ / "a.json", b = dir_ / "b.json";
  ASSERT_EQ(run("codebook --type 2,2 --M 3 --seed 7 -o " + a.string()).code, 0);
  ASSERT_EQ(run("codebook --type 2,2 --M 3 --seed 7 -o " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  auto doc = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(doc["words"].size(), 3u);
  EXPECT_TRUE(doc["certificate"]["passed"].get<bool>());
}

TEST_F(CliTest, codebook_packing_failure) {
  auto r = run("codebook --type 1,1,1,1,1 --M 2 --max-attempts 2");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("packing"), std::string::npos);
  EXPECT_EQ(run("codebook --type 1,1 --M 5").code, 4);
}

TEST_F(CliTest, simulate_writes_csv_and_summary) {
  auto ch = orthogonal_channel();
  auto csv = dir_ / "out.csv", csv2 = dir_ / "out2.csv", sum = dir_ / "sum.json";
  auto r = run("simulate --channel " + ch.string() + " --R 0.3 --n 2,3 --seed 5 -o " + csv.string() +
               " --summary " + sum.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("n,M,C,epsilon,rate_empirical,exponent_theory,seed\r\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  auto doc = nlohmann::json::parse(slurp(sum));
  EXPECT_NEAR(doc["mutual_information"].get<double>(), std::log(2.0), 1e-12);
  ASSERT_EQ(run("simulate --channel " + ch.string() + " --R 0.3 --n 2,3 --seed 5 -o " + csv2.string()).code, 0);
  EXPECT_EQ(text, slurp(csv2));
}

TEST_F(CliTest, simulate_rejects_bad_channel) {
  auto bad = write("bad.json", R"({"d": 2, "k": 2, "matrices": [
      [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
      [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]]})");
  auto r = run("simulate --channel " + bad.string() + " --R 0.1 --n 2");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("matrices[1]"), std::string::npos) << r.err;
  EXPECT_EQ(run("simulate --channel " + (dir_ / "missing.json").string()).code, 4);
  EXPECT_EQ(run("simulate --channel " + orthogonal_channel().string() + " --p 0.7,0.7").code, 4);
  EXPECT_EQ(run("simulate --channel " + orthogonal_channel().string() + " --R -1").code, 4);
}

TEST_F(CliTest, config_file_with_flag_override) {
  auto ch = orthogonal_channel();
  auto cfg = write("run.toml", "[simulate]\nchannel = \"" + ch.string() + "\"\nR = 0.3\nn = \"2,3,4\"\nseed = 3\n");
  auto r = run("--config " + cfg.string() + " simulate --n 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2) << r.out;
  EXPECT_NE(r.out.find(",3\r\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, exponent_curves) {
  auto r = run("exponent --channel " + orthogonal_channel().string() + " --r-max 0.6 --r-steps 7");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    double rate, u, h;
    char c;
    std::istringstream row(line);
    row >> rate >> c >> u >> c >> h;
    EXPECT_NEAR(h, std::log(2.0) - rate, 1e-6);
    EXPECT_GE(h, u - 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 7);
  auto bits = run("--bits exponent --channel " + orthogonal_channel().string() + " --r-max 0 --r-steps 1");
  EXPECT_NE(bits.out.find("\r\n0,0.49999"), std::string::npos) << bits.out;
}

TEST_F(CliTest, verify_battery) {
  auto r = run("verify");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  auto f = run("verify --inject-fault");
  EXPECT_EQ(f.code, 1);
  EXPECT_NE(f.err.find("decoder_projectors"), std::string::npos) << f.err;
  auto only = run("verify --only lemma1");
  EXPECT_EQ(only.code, 0);
  EXPECT_EQ(std::count(only.out.begin(), only.out.end(), '\n'), 1);
  EXPECT_NE(only.out.find("worst_slack"), std::string::npos);
  EXPECT_EQ(run("verify --only nonsense").code, 4);
}

TEST_F(CliTest, usage_errors) {
  EXPECT_EQ(run("").code, 4);
  EXPECT_EQ(run("decompose").code, 4);
  EXPECT_EQ(run("--help").code, 0);
}
