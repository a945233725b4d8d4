#include "srauth/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>

#include "srauth/error.hpp"
#include "srauth/json_io.hpp"

namespace srauth::config {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Reads a quoted string starting at s[0] == '"'; advances `s` past it.
std::string ReadQuoted(std::string_view& s, const std::string& where) {
  std::string out;
  std::size_t i = 1;
  for (; i < s.size() && s[i] != '"'; ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      switch (s[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: out += s[i];
      }
    } else {
      out += s[i];
    }
  }
  if (i >= s.size()) throw SchemaError(where, "unterminated string");
  s.remove_prefix(i + 1);
  return out;
}

// Drops a trailing comment that is not inside quotes.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

Value ParseValue(std::string_view raw, const std::string& where) {
  Value v;
  raw = Trim(raw);
  if (raw.empty()) throw SchemaError(where, "missing value");
  if (raw.front() == '"') {
    v.text = ReadQuoted(raw, where);
    if (!Trim(raw).empty()) throw SchemaError(where, "unexpected text after string");
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw SchemaError(where, "unterminated array");
    std::string_view body = Trim(raw.substr(1, raw.size() - 2));
    std::vector<std::string> items;
    while (!body.empty()) {
      if (body.front() == '"') {
        items.push_back(ReadQuoted(body, where));
      } else {
        auto comma = body.find(',');
        items.emplace_back(Trim(body.substr(0, comma)));
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma);
      }
      body = Trim(body);
      if (!body.empty()) {
        if (body.front() != ',') throw SchemaError(where, "expected ',' in array");
        body = Trim(body.substr(1));
      }
    }
    v.list = std::move(items);
    return v;
  }
  v.text = std::string(raw);
  return v;
}

double ToDouble(const std::string& key, const Value& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || p != v.text.data() + v.text.size()) {
    throw SchemaError(key, "expected a number, got '" + v.text + "'");
  }
  return out;
}

long long ToInt(const std::string& key, const Value& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || p != v.text.data() + v.text.size()) {
    throw SchemaError(key, "expected an integer, got '" + v.text + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const Value& v) {
  if (v.text == "true") return true;
  if (v.text == "false") return false;
  throw SchemaError(key, "expected true or false, got '" + v.text + "'");
}

}  // namespace

Document ParseDocument(std::string_view text) {
  Document doc;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    std::string_view line = Trim(StripComment(text.substr(start, nl - start)));
    start = nl + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SchemaError(where, "malformed section header");
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw SchemaError(where, "empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SchemaError(where, "expected key = value");
    const std::string key(Trim(line.substr(0, eq)));
    if (key.empty()) throw SchemaError(where, "empty key");
    Value v = ParseValue(line.substr(eq + 1), where);
    v.line = line_no;
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.count(full)) throw SchemaError(where, "duplicate key '" + full + "'");
    doc.emplace(full, std::move(v));
  }
  return doc;
}

std::vector<report::Format> ParseFormats(const std::vector<std::string>& names) {
  std::vector<report::Format> out;
  for (const auto& n : names) {
    auto f = report::FormatFromString(n);
    if (!f) throw UsageError("unknown report format '" + n + "' (expected json, csv, markdown)");
    if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
  }
  if (out.empty()) throw UsageError("at least one report format is required");
  return out;
}

RunConfig Apply(const Document& doc, RunConfig c, const fs::path& relative_to) {
  auto path = [&](const Value& v) {
    fs::path p = v.text;
    return p.is_absolute() || relative_to.empty() ? p : relative_to / p;
  };
  using Setter = std::function<void(const std::string&, const Value&)>;
  const std::map<std::string, Setter> setters = {
      {"paths.workflow_dir", [&](auto&, auto& v) { c.workflow_dir = path(v); }},
      {"paths.session_dir", [&](auto&, auto& v) { c.session_dir = path(v); }},
      {"paths.profile_dir", [&](auto&, auto& v) { c.profile_dir = path(v); }},
      {"paths.output_dir", [&](auto&, auto& v) { c.output_dir = path(v); }},
      {"paths.catalog", [&](auto&, auto& v) { c.catalog = path(v); }},
      {"paths.settings", [&](auto&, auto& v) { c.settings = path(v); }},
      {"paths.golden", [&](auto&, auto& v) { c.golden = path(v); }},
      {"analyzer.epsilon_overlap_s",
       [&](auto& k, auto& v) { c.analyzer.epsilon_overlap_s = ToDouble(k, v); }},
      {"analyzer.tau_prompt", [&](auto& k, auto& v) { c.analyzer.tau_prompt = ToDouble(k, v); }},
      {"phish.threshold", [&](auto& k, auto& v) { c.phish_threshold = ToDouble(k, v); }},
      {"sim.fatigue_interval_s",
       [&](auto& k, auto& v) { c.sim.fatigue_interval_s = ToDouble(k, v); }},
      {"sim.fatigue_rounds",
       [&](auto& k, auto& v) { c.sim.fatigue_rounds = static_cast<int>(ToInt(k, v)); }},
      {"sim.admin_lockout_threshold",
       [&](auto& k, auto& v) {
         if (v.text == "none") {
           c.sim.admin_lockout_threshold.reset();
         } else {
           c.sim.admin_lockout_threshold = static_cast<int>(ToInt(k, v));
         }
       }},
      {"sim.exhaustion_threshold",
       [&](auto& k, auto& v) { c.sim.exhaustion_threshold = static_cast<int>(ToInt(k, v)); }},
      {"sim.concurrency_skew_s",
       [&](auto& k, auto& v) { c.sim.concurrency_skew_s = ToDouble(k, v); }},
      {"sim.rng_seed",
       [&](auto& k, auto& v) { c.sim.rng_seed = static_cast<std::uint64_t>(ToInt(k, v)); }},
      {"sim.single_device_headphones",
       [&](auto& k, auto& v) { c.sim.single_device_headphones = ToBool(k, v); }},
      {"sim.concurrent_protected_device",
       [&](auto& k, auto& v) {
         auto p = EnumFromString<PlatformKind>(v.text);
         if (!p) throw SchemaError(k, "expected TERMINAL or SMARTPHONE");
         c.sim.concurrent_protected_device = *p;
       }},
      {"stt.backend",
       [&](auto& k, auto& v) {
         if (v.text == "replay") {
           c.stt = SttKind::kReplay;
         } else if (v.text == "http") {
           c.stt = SttKind::kHttp;
         } else {
           throw SchemaError(k, "expected replay or http");
         }
       }},
      {"stt.endpoint", [&](auto&, auto& v) { c.stt_endpoint = v.text; }},
      {"stt.token_env", [&](auto&, auto& v) { c.stt_token_env = v.text; }},
      {"stt.timeout_s", [&](auto& k, auto& v) { c.stt_timeout_s = ToDouble(k, v); }},
      {"stt.confidence_floor", [&](auto& k, auto& v) { c.confidence_floor = ToDouble(k, v); }},
      {"report.formats",
       [&](auto& k, auto& v) {
         if (!v.list) throw SchemaError(k, "expected an array of strings");
         c.formats = ParseFormats(*v.list);
       }},
  };
  for (const auto& [key, value] : doc) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw SchemaError("line " + std::to_string(value.line), "unknown key '" + key + "'");
    }
    if (value.list && key != "report.formats") throw SchemaError(key, "expected a scalar");
    it->second(key, value);
  }
  return c;
}

RunConfig LoadFile(const fs::path& path, RunConfig base) {
  return Apply(ParseDocument(ReadTextFile(path)), std::move(base), path.parent_path());
}

std::vector<std::string> Validate(const RunConfig& c) {
  std::vector<std::string> out;
  if (!(c.analyzer.epsilon_overlap_s >= 0.0)) {
    out.push_back("analyzer.epsilon_overlap_s must be non-negative");
  }
  if (!(c.analyzer.tau_prompt >= 0.0 && c.analyzer.tau_prompt <= 1.0)) {
    out.push_back("analyzer.tau_prompt must be within [0, 1]");
  }
  if (!(c.phish_threshold > 0.0 && c.phish_threshold <= 1.0)) {
    out.push_back("phish.threshold must be within (0, 1]");
  }
  if (!(c.stt_timeout_s > 0.0)) out.push_back("stt.timeout_s must be positive");
  if (!(c.confidence_floor >= 0.0 && c.confidence_floor <= 1.0)) {
    out.push_back("stt.confidence_floor must be within [0, 1]");
  }
  for (auto& v : authsim::ValidateConfig(c.sim)) out.push_back("sim: " + v);
  return out;
}

}  // namespace srauth::config
