#pragma once

// Run configuration. The on-disk form is a small TOML-style document:
//
//   # comment
//   [paths]
//   output_dir = "out"
//   [report]
//   formats = ["json", "csv"]
//
// Values are quoted strings, bare numbers, true/false, or flat arrays of
// strings. Keys are addressed as "section.key". Relative paths resolve
// against the config file's directory.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srauth/analyzer.hpp"
#include "srauth/authsim.hpp"
#include "srauth/report.hpp"

namespace srauth::config {

namespace fs = std::filesystem;

struct Value {
  std::string text;                        // scalar, unquoted
  std::optional<std::vector<std::string>> list;
  int line = 0;
};

using Document = std::map<std::string, Value>;

// Throws SchemaError naming "line N" on malformed input.
Document ParseDocument(std::string_view text);

enum class SttKind { kReplay, kHttp };

struct RunConfig {
  fs::path workflow_dir;
  fs::path session_dir;
  fs::path profile_dir;
  fs::path output_dir = "out";
  fs::path catalog;
  fs::path settings;  // matrix settings for simulate
  fs::path golden;    // optional verdict regression file

  analyzer::AnalyzerConfig analyzer;
  double phish_threshold = 0.9;
  authsim::SimConfig sim;

  SttKind stt = SttKind::kReplay;
  std::string stt_endpoint;
  std::string stt_token_env;  // name of the environment variable holding the token
  double stt_timeout_s = 60.0;
  double confidence_floor = 0.0;

  std::vector<report::Format> formats = {report::Format::kJson, report::Format::kCsv,
                                         report::Format::kMarkdown};
};

// Applies a document onto `base`. Unknown keys are an error so that typos
// do not pass silently.
RunConfig Apply(const Document& doc, RunConfig base, const fs::path& relative_to);
RunConfig LoadFile(const fs::path& path, RunConfig base = {});

// Range checks for thresholds; empty when valid.
std::vector<std::string> Validate(const RunConfig& c);

std::vector<report::Format> ParseFormats(const std::vector<std::string>& names);

}  // namespace srauth::config
