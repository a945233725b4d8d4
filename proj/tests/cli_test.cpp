#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "srauth/cli.hpp"
#include "srauth/json_io.hpp"
#include "srauth/report.hpp"
#include "test_util.hpp"

namespace srauth::cli {
namespace {

namespace fs = std::filesystem;
using testing::kDataDir;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string P(const fs::path& p) { return p.string(); }

const fs::path kFixtures = kDataDir / "fixtures";

std::vector<std::string> AnalyzeArgs(const fs::path& out_dir, const fs::path& sessions) {
  return {"--output-dir", P(out_dir),         "analyze",
          "--sessions",   P(sessions),        "--workflows",
          P(kFixtures / "workflows"),         "--profiles",
          P(kDataDir / "profiles"),           "--catalog",
          P(kDataDir / "catalog.json")};
}

std::vector<std::string> SimulateArgs(const fs::path& out_dir) {
  return {"--output-dir", P(out_dir), "simulate", "--catalog", P(kDataDir / "catalog.json"),
          "--profiles", P(kDataDir / "profiles"), "--settings", P(kDataDir / "settings.json")};
}

// Relative path -> contents for every regular file under `root`.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = ReadTextFile(e.path());
  }
  return out;
}

TEST(CliTest, NoSubcommandOrUnknownIsUsage) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"analyze", "--bogus"}).code, kExitUsage);
  const auto help = Invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
}

TEST(AnalyzeCmdTest, EmptySessionDirSucceeds) {
  TempDir tmp;
  fs::create_directories(tmp / "sessions");
  const auto r = Invoke(AnalyzeArgs(tmp / "out", tmp / "sessions"));
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(AnalyzeCmdTest, StrictMalformedSessionWritesNothing) {
  TempDir tmp;
  fs::create_directories(tmp / "sessions");
  fs::copy_file(kFixtures / "sessions" / "winauth-jaws.json", tmp / "sessions" / "a.json");
  std::ofstream(tmp / "sessions" / "b.json") << "{\"id\": \"broken\", \"events\": [";
  auto args = AnalyzeArgs(tmp / "out", tmp / "sessions");
  args.insert(args.begin(), "--strict");
  const auto r = Invoke(args);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("b.json"), std::string::npos) << r.err;
  EXPECT_TRUE(Snapshot(tmp / "out").empty());

  // Without --strict the good file is still analyzed.
  const auto lenient = Invoke(AnalyzeArgs(tmp / "out", tmp / "sessions"));
  EXPECT_EQ(lenient.code, kExitError);
  EXPECT_TRUE(fs::exists(tmp / "out" / "reports" / "winauth-jaws.json"));
}

TEST(AnalyzeCmdTest, FixtureBatchMatrices) {
  TempDir tmp;
  const auto r = Invoke(AnalyzeArgs(tmp / "out", kFixtures / "sessions"));
  EXPECT_EQ(r.code, kExitFindings) << r.err;
  const auto rows = report::ParseCsv(ReadTextFile(tmp / "out" / "matrices" / "issues.csv"));
  ASSERT_GE(rows.size(), 2u);
  auto cell = [&](const std::string& method, const std::string& reader) -> std::string {
    std::size_t col = 0;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
      if (rows[0][i] == reader) col = i;
    }
    for (const auto& row : rows) {
      if (row[0] == method && col) return row[col];
    }
    return "?";
  };
  EXPECT_EQ(cell("winauth", "chromevox"), "UCEOB");
  EXPECT_EQ(cell("winauth", "jaws"), "UCO");
  EXPECT_EQ(cell("authy", "nvda"), "NPO");
  EXPECT_EQ(cell("google-authenticator", "jaws"), "");
  EXPECT_TRUE(fs::exists(tmp / "out" / "matrices" / "comprehensibility.md"));
  EXPECT_TRUE(fs::exists(tmp / "out" / "reports" / "authy-nvda.json"));
  EXPECT_NE(r.out.find("winauth-jaws\t"), std::string::npos);
}

TEST(SimulateCmdTest, SingleCellFilter) {
  TempDir tmp;
  auto args = SimulateArgs(tmp / "out");
  for (const char* a : {"--method", "duo-push", "--setting", "SMARTPHONE", "--reader", "talkback",
                        "--attack", "NOTIFICATION_FATIGUE"}) {
    args.push_back(a);
  }
  const auto r = Invoke(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = report::ParseCsv(r.out);
  ASSERT_EQ(rows.size(), 2u) << r.out;
  EXPECT_EQ(rows[1][0], "duo-push");
  EXPECT_EQ(rows[1][5], "PARTIAL");
  EXPECT_TRUE(fs::exists(tmp / "out" / "matrices" / "verdicts.csv"));
}

TEST(SimulateCmdTest, GoldenMatchAndMismatch) {
  TempDir tmp;
  auto args = SimulateArgs(tmp / "out");
  args.insert(args.end(), {"--golden", P(kDataDir / "golden" / "verdicts.csv")});
  const auto ok = Invoke(args);
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("144/144"), std::string::npos) << ok.out;

  args.insert(args.end(), {"--lockout", "none"});
  const auto bad = Invoke(args);
  EXPECT_EQ(bad.code, kExitFindings);
  EXPECT_NE(bad.out.find("MISMATCH"), std::string::npos);
}

TEST(SimulateCmdTest, FiltersNarrowGoldenComparison) {
  TempDir tmp;
  auto args = SimulateArgs(tmp / "out");
  args.insert(args.end(), {"--golden", P(kDataDir / "golden" / "verdicts.csv"), "--method",
                           "duo-push", "--reader", "talkback", "--attack",
                           "NOTIFICATION_FATIGUE"});
  const auto r = Invoke(args);
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("golden: 2/2 cells match"), std::string::npos) << r.out;
}

TEST(SimulateCmdTest, MissingProfileIsNamed) {
  TempDir tmp;
  fs::create_directories(tmp / "profiles");
  for (const auto& e : fs::directory_iterator(kDataDir / "profiles")) {
    if (e.path().stem() != "talkback") fs::copy_file(e.path(), tmp / "profiles" / e.path().filename());
  }
  auto args = SimulateArgs(tmp / "out");
  args[6] = P(tmp / "profiles");
  const auto r = Invoke(args);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("talkback"), std::string::npos) << r.err;
}

TEST(SimulateCmdTest, BadFilterValues) {
  TempDir tmp;
  auto args = SimulateArgs(tmp / "out");
  args.insert(args.end(), {"--attack", "EVERYTHING"});
  EXPECT_EQ(Invoke(args).code, kExitUsage);
  args = SimulateArgs(tmp / "out");
  args.insert(args.end(), {"--method", "carrier-pigeon"});
  const auto r = Invoke(args);
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("carrier-pigeon"), std::string::npos);
}

TEST(PhishCmdTest, ExitCodes) {
  const auto trusted = P(kDataDir / "examples" / "trusted.txt");
  const auto flagged = Invoke({"phish", "bankoffamerica.com", "--trusted", trusted});
  EXPECT_EQ(flagged.code, kExitFindings);
  EXPECT_NE(flagged.out.find("bankofamerica.com"), std::string::npos);
  EXPECT_EQ(Invoke({"phish", "bankofamerica.com", "--trusted", trusted}).code, kExitOk);
  EXPECT_EQ(Invoke({"phish", "example.org", "--trusted", trusted}).code, kExitOk);

  TempDir tmp;
  std::ofstream(tmp / "empty.txt") << "# nothing here\n";
  EXPECT_EQ(Invoke({"phish", "x.com", "--trusted", P(tmp / "empty.txt")}).code, kExitUsage);
  EXPECT_EQ(Invoke({"phish", "--trusted", trusted}).code, kExitUsage);
}

TEST(TranscribeCmdTest, ReplayWritesSession) {
  TempDir tmp;
  const auto r = Invoke({"--output-dir", P(tmp / "out"), "transcribe",
                         P(kDataDir / "examples" / "transcribe-google-call.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto path = tmp / "out" / "sessions" / "google-call-talkback-rec.json";
  ASSERT_TRUE(fs::exists(path));
  const auto j = Json::parse(ReadTextFile(path));
  EXPECT_EQ(j["events"].size(), 4u);
}

TEST(TranscribeCmdTest, HttpTimeoutIsRetryable) {
  httplib::Server server;
  server.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1000));
    res.set_content("[]", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir tmp;
  const auto r = Invoke({"--output-dir", P(tmp / "out"), "transcribe",
                         P(kDataDir / "examples" / "transcribe-google-call.json"), "--backend",
                         "http", "--endpoint",
                         "http://127.0.0.1:" + std::to_string(port) + "/slow", "--timeout",
                         "0.2"});
  server.stop();
  th.join();
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("retryable"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(tmp / "out" / "sessions" / "google-call-talkback-rec.json"));
}

TEST(ValidateCmdTest, ShippedDataIsValid) {
  const auto r = Invoke({"--config", P(kDataDir / "examples" / "srauth.toml"), "validate"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("ok "), std::string::npos);
}

TEST(DeterminismTest, RepeatedRunsAreByteIdentical) {
  TempDir tmp;
  for (const char* run : {"a", "b"}) {
    auto sim = SimulateArgs(tmp / run);
    sim.insert(sim.begin(), "--deterministic");
    ASSERT_EQ(Invoke(sim).code, kExitOk);
    auto an = AnalyzeArgs(tmp / run, kFixtures / "sessions");
    an.insert(an.begin(), "--deterministic");
    ASSERT_EQ(Invoke(an).code, kExitFindings);
  }
  const auto a = Snapshot(tmp / "a"), b = Snapshot(tmp / "b");
  EXPECT_GT(a.size(), 10u);
  EXPECT_EQ(a, b);
  for (const auto& [name, text] : a) {
    EXPECT_EQ(text.find("generated_at"), std::string::npos) << name;
  }
}

TEST(DeterminismTest, TimestampPresentByDefault) {
  TempDir tmp;
  ASSERT_EQ(Invoke(SimulateArgs(tmp / "out")).code, kExitOk);
  const auto j = Json::parse(ReadTextFile(tmp / "out" / "matrices" / "verdicts.json"));
  EXPECT_TRUE(j.contains("generated_at"));
}

}  // namespace
}  // namespace srauth::cli
