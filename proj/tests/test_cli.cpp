#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / ("esqpt_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

class RemoveWorkdir : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(workdir()); }
};
[[maybe_unused]] auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new RemoveWorkdir);

int run(const std::string& args) {
  const std::string cmd = std::string(ESQPT_CLI_PATH) + " " + args + " 2>" + (workdir() / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string out(const std::string& name) { return (workdir() / name).string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Data rows of a CSV file (after metadata and header).
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::stringstream ss(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool seen_header = false;
  while (std::getline(ss, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = split(line);
      continue;
    }
    rows.push_back(split(line));
  }
  return rows;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TEST(Cli, SpectrumSinglePoint) {
  ASSERT_EQ(run("spectrum --n-spins 100 --alpha 0.5 --out " + out("spec.csv")), 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(slurp(out("spec.csv")), &header);
  EXPECT_EQ(rows.size(), 101u);
  EXPECT_EQ(header, (std::vector<std::string>{"alpha", "level", "energy", "energy_per_n", "parity", "sector_index"}));
}

TEST(Cli, EmptyGridWritesNothing) {
  const auto p = out("empty.csv");
  EXPECT_NE(run("spectrum --n-spins 100 --alpha-start 0.5 --alpha-stop 0.4 --alpha-step 0.01 --out " + p), 0);
  EXPECT_FALSE(fs::exists(p));
  EXPECT_NE(slurp(workdir() / "stderr.txt").find("error"), std::string::npos);
}

TEST(Cli, InvalidConfigFails) {
  EXPECT_NE(run("le --n-spins 401 --out " + out("odd.csv")), 0);
  EXPECT_FALSE(fs::exists(out("odd.csv")));
  EXPECT_NE(run("le --parity sideways --out " + out("p.csv")), 0);
  EXPECT_NE(run("le --ini 5000 --out " + out("ini.csv")), 0);
  EXPECT_NE(run("pr --alpha-start 0.3 --out " + out("partial.csv")), 0);
  EXPECT_NE(run("frobnicate --out " + out("f.csv")), 0);
  EXPECT_FALSE(fs::exists(out("ini.csv")));
}

TEST(Cli, UnwritableOutput) {
  EXPECT_NE(run("dos --n-spins 100 --out " + (workdir() / "no" / "such" / "dir.csv").string()), 0);
}

TEST(Cli, ReplayIsByteIdentical) {
  const std::vector<std::string> runs = {
      "le-dist --n-spins 200 --alpha 0.1 --ini critical --samples 20000",
      "avg-le --n-spins 200 --alpha-start 0.3 --alpha-stop 0.7 --alpha-step 0.02",
      "work --n-spins 120 --alpha 0.4",
      "spectral --n-spins 200 --alpha 0.48 --ini 37 --parity odd",
      "pr --n-spins 160 --alpha 0.4 --ini 29",
      "dos --n-spins 300 --alpha 0.5 --bins 21",
  };
  int i = 0;
  for (const auto& r : runs) {
    for (const char* fmt : {"csv", "json"}) {
      const auto first = out("run" + std::to_string(i) + "." + fmt);
      const auto again = out("replay" + std::to_string(i) + "." + fmt);
      ++i;
      ASSERT_EQ(run(r + " --format " + fmt + " --out " + first), 0) << r;
      ASSERT_EQ(run("replay " + first + " --out " + again), 0) << r;
      EXPECT_EQ(slurp(first), slurp(again)) << r << ' ' << fmt;
    }
  }
}

TEST(Cli, CsvAndJsonCarryTheSamePayload) {
  const std::string r = "work --n-spins 200 --alpha-start 0.4 --alpha-stop 0.5 --alpha-step 0.01";
  ASSERT_EQ(run(r + " --out " + out("w.csv")), 0);
  ASSERT_EQ(run(r + " --format json --out " + out("w.json")), 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(slurp(out("w.csv")), &header);
  const auto j = nlohmann::ordered_json::parse(slurp(out("w.json")));

  // schema
  ASSERT_TRUE(j.is_object());
  ASSERT_TRUE(j.at("meta").is_object());
  for (const auto& [k, v] : j["meta"].items()) EXPECT_TRUE(v.is_string()) << k;
  ASSERT_TRUE(j.at("columns").is_array());
  ASSERT_TRUE(j.at("rows").is_array());
  EXPECT_EQ(j["columns"].get<std::vector<std::string>>(), header);

  ASSERT_EQ(j["rows"].size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(j["rows"][i].size(), header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      const auto& cell = j["rows"][i][k];
      const std::string text = cell.is_number_integer() ? std::to_string(cell.get<long long>()) : g17(cell.get<double>());
      EXPECT_EQ(text, rows[i][k]);
    }
  }
  // metadata is identical too
  std::stringstream ss(slurp(out("w.csv")));
  std::string line;
  for (const auto& [k, v] : j["meta"].items()) {
    std::getline(ss, line);
    EXPECT_EQ(line, "#" + k + "=" + v.get<std::string>());
  }
}

TEST(Cli, JobsDoNotChangeOutput) {
  const std::string r = "avg-le --n-spins 200 --alpha-start 0.3 --alpha-stop 0.6 --alpha-step 0.01";
  ASSERT_EQ(run(r + " --jobs 1 --out " + out("j1.csv")), 0);
  ASSERT_EQ(run(r + " --jobs 4 --out " + out("j4.csv")), 0);
  ASSERT_EQ(std::system(("ESQPT_JOBS=3 " + std::string(ESQPT_CLI_PATH) + " " + r + " --out " + out("je.csv")).c_str()), 0);
  EXPECT_EQ(slurp(out("j1.csv")), slurp(out("j4.csv")));
  EXPECT_EQ(slurp(out("j1.csv")), slurp(out("je.csv")));
}

TEST(Cli, ZeroQuenchSeries) {
  ASSERT_EQ(run("le --n-spins 100 --alpha 0.3 --dalpha 0 --ini 10 --samples 2001 --out " + out("flat.csv")), 0);
  for (const auto& r : csv_rows(slurp(out("flat.csv")))) EXPECT_NEAR(std::stod(r[1]), 1.0, 1e-12);
}

TEST(Cli, DefaultsAreRecorded) {
  ASSERT_EQ(run("le-dist --n-spins 100 --out " + out("defaults.csv")), 0);
  const std::string text = slurp(out("defaults.csv"));
  for (const char* line : {"#t_max=5000\n", "#samples=200000\n", "#bins=50\n", "#ini=critical\n"})
    EXPECT_NE(text.find(line), std::string::npos) << line;
  EXPECT_EQ(csv_rows(text).size(), 50u);
}

