#include "srauth/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>

#include "srauth/error.hpp"

namespace srauth::report {
namespace {

constexpr std::string_view kGoldenHeader[] = {"method", "setting", "terminal_reader",
                                              "smartphone_reader", "attack", "verdict",
                                              "source_anchor"};

std::string MarkdownCell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string CsvLine(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += CsvField(fields[i]);
  }
  return line + "\n";
}

std::string MarkdownTable(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::string out = "|";
  for (const auto& h : header) out += " " + MarkdownCell(h) + " |";
  out += "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& r : rows) {
    out += "|";
    for (const auto& c : r) out += " " + MarkdownCell(c) + " |";
    out += "\n";
  }
  return out;
}

Json Envelope(const RenderOptions& opt) {
  Json j = Json::object();
  if (!opt.generated_at.empty()) j["generated_at"] = opt.generated_at;
  return j;
}

std::string MarkdownPreamble(const std::string& title, const RenderOptions& opt) {
  std::string out = "# " + title + "\n\n";
  if (!opt.generated_at.empty()) out += "Generated " + opt.generated_at + "\n\n";
  return out;
}

std::vector<std::string> OutcomeRow(const authsim::AttackOutcome& o) {
  return {o.method,
          std::string(ToString(o.setting.kind)),
          o.setting.terminal_reader.value_or(""),
          o.setting.smartphone_reader.value_or(""),
          std::string(ToString(o.attack)),
          std::string(ToString(o.verdict)),
          o.profile,
          std::to_string(o.rounds_elapsed)};
}

const std::vector<std::string> kOutcomeHeader = {
    "method", "setting", "terminal_reader", "smartphone_reader",
    "attack", "verdict", "profile",         "rounds_elapsed"};

// Key used to match outcomes against golden rows.
std::string CellKey(const std::string& method, const PlatformSetting& s,
                    authsim::AttackKind attack) {
  return method + "|" + std::string(ToString(s.kind)) + "|" + s.terminal_reader.value_or("") +
         "|" + s.smartphone_reader.value_or("") + "|" + std::string(ToString(attack));
}

}  // namespace

std::string_view Extension(Format f) {
  switch (f) {
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
    case Format::kMarkdown: return "md";
  }
  return "txt";
}

std::optional<Format> FormatFromString(std::string_view s) {
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  if (s == "markdown" || s == "md") return Format::kMarkdown;
  return std::nullopt;
}

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json ToJson(const analyzer::IssueReport& r) {
  Json findings = Json::array();
  for (const auto& f : r.findings) {
    Json spans = Json::array();
    for (const auto& s : f.spans) {
      spans.push_back({{"event_index", s.event_index},
                       {"token_begin", s.token_begin},
                       {"token_count", s.token_count}});
    }
    findings.push_back(
        {{"code", analyzer::ToString(f.code)}, {"evidence", f.evidence}, {"spans", spans}});
  }
  Json j{{"session_id", r.session_id},
         {"workflow_id", r.workflow_id},
         {"method", r.method},
         {"profile_id", r.profile_id},
         {"reader_key", r.reader_key},
         {"codes", r.CodeSet()},
         {"findings", findings},
         {"comprehensibility",
          {{"score", r.comprehensibility.score},
           {"percent", Percent(r.comprehensibility.score)},
           {"shared_tokens", r.comprehensibility.shared_tokens},
           {"degenerate", r.comprehensibility.degenerate}}},
         {"speaking_time_s", r.speaking_time_s},
         {"exceeds_verification_time", r.exceeds_verification_time}};
  return j;
}

std::string RenderReport(const analyzer::IssueReport& r, const RenderOptions& opt) {
  Json j = Envelope(opt);
  j["report"] = ToJson(r);
  return j.dump(2);
}

const std::optional<std::string>& Matrix::At(std::string_view row, std::string_view column) const {
  static const std::optional<std::string> kNone;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] != row) continue;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (columns[k] == column) return cells[i][k];
    }
  }
  return kNone;
}

namespace {

template <typename Cell, typename Add, typename Finish>
Matrix BuildMatrix(std::string title, std::span<const analyzer::IssueReport> reports, Add add,
                   Finish finish) {
  std::map<std::pair<std::string, std::string>, Cell> acc;
  std::set<std::string> rows, cols;
  for (const auto& r : reports) {
    rows.insert(r.method);
    cols.insert(r.reader_key);
    add(acc[{r.method, r.reader_key}], r);
  }
  Matrix m;
  m.title = std::move(title);
  m.row_label = "method";
  m.rows.assign(rows.begin(), rows.end());
  m.columns.assign(cols.begin(), cols.end());
  for (const auto& row : m.rows) {
    auto& line = m.cells.emplace_back();
    for (const auto& col : m.columns) {
      auto it = acc.find({row, col});
      line.push_back(it == acc.end() ? std::nullopt
                                     : std::optional<std::string>(finish(it->second)));
    }
  }
  return m;
}

}  // namespace

Matrix IssueMatrix(std::span<const analyzer::IssueReport> reports) {
  using Codes = std::set<analyzer::IssueCode>;
  return BuildMatrix<Codes>(
      "Communicability issues", reports,
      [](Codes& c, const analyzer::IssueReport& r) {
        for (const auto& f : r.findings) c.insert(f.code);
      },
      [](const Codes& c) {
        std::string s;
        for (auto code : c) {
          if (!s.empty()) s += '+';
          s += analyzer::ToString(code);
        }
        return s;
      });
}

Matrix ComprehensibilityMatrix(std::span<const analyzer::IssueReport> reports) {
  using Mean = std::pair<double, int>;
  return BuildMatrix<Mean>(
      "Comprehensibility (%)", reports,
      [](Mean& m, const analyzer::IssueReport& r) {
        m.first += r.comprehensibility.score;
        ++m.second;
      },
      [](const Mean& m) { return Percent(m.first / m.second); });
}

std::string RenderMatrix(const Matrix& m, Format f, const RenderOptions& opt) {
  switch (f) {
    case Format::kJson: {
      Json j = Envelope(opt);
      j["title"] = m.title;
      j["rows"] = m.rows;
      j["columns"] = m.columns;
      Json cells = Json::array();
      for (const auto& line : m.cells) {
        Json row = Json::array();
        for (const auto& c : line) row.push_back(c ? Json(*c) : Json(nullptr));
        cells.push_back(row);
      }
      j["cells"] = cells;
      return j.dump(2);
    }
    case Format::kCsv: {
      std::vector<std::string> header{m.row_label};
      header.insert(header.end(), m.columns.begin(), m.columns.end());
      std::string out = CsvLine(header);
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        std::vector<std::string> line{m.rows[i]};
        for (const auto& c : m.cells[i]) line.push_back(c.value_or("-"));
        out += CsvLine(line);
      }
      return out;
    }
    case Format::kMarkdown: {
      std::vector<std::string> header{m.row_label};
      header.insert(header.end(), m.columns.begin(), m.columns.end());
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        auto& line = rows.emplace_back(std::vector<std::string>{m.rows[i]});
        for (const auto& c : m.cells[i]) line.push_back(c.value_or("-"));
      }
      return MarkdownPreamble(m.title, opt) + MarkdownTable(header, rows);
    }
  }
  return {};
}

std::string RenderOutcomes(std::span<const authsim::AttackOutcome> outcomes, Format f,
                           const RenderOptions& opt) {
  switch (f) {
    case Format::kJson: {
      Json j = Envelope(opt);
      Json arr = Json::array();
      for (const auto& o : outcomes) {
        arr.push_back({{"method", o.method},
                       {"setting", srauth::ToJson(o.setting)},
                       {"attack", ToString(o.attack)},
                       {"verdict", ToString(o.verdict)},
                       {"profile", o.profile},
                       {"rounds_elapsed", o.rounds_elapsed},
                       {"trace", o.trace}});
      }
      j["outcomes"] = arr;
      return j.dump(2);
    }
    case Format::kCsv: {
      std::string out = CsvLine(kOutcomeHeader);
      for (const auto& o : outcomes) out += CsvLine(OutcomeRow(o));
      return out;
    }
    case Format::kMarkdown: {
      std::vector<std::vector<std::string>> rows;
      for (const auto& o : outcomes) rows.push_back(OutcomeRow(o));
      return MarkdownPreamble("Attack verdicts", opt) + MarkdownTable(kOutcomeHeader, rows);
    }
  }
  return {};
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;  // current row has content
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) throw SchemaError("csv", "unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GoldenCell> ParseGolden(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty()) throw SchemaError("header", "golden file is empty");
  const auto& header = rows.front();
  if (header.size() != std::size(kGoldenHeader) ||
      !std::equal(header.begin(), header.end(), std::begin(kGoldenHeader))) {
    throw SchemaError("header", "expected columns method,setting,terminal_reader,"
                                "smartphone_reader,attack,verdict,source_anchor");
  }
  std::vector<GoldenCell> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string at = "row " + std::to_string(i);
    if (r.size() != std::size(kGoldenHeader)) {
      throw SchemaError(at, "expected " + std::to_string(std::size(kGoldenHeader)) + " columns");
    }
    GoldenCell g;
    g.method = r[0];
    auto kind = EnumFromString<SettingKind>(r[1]);
    if (!kind) throw SchemaError(at + ".setting", "unknown setting '" + r[1] + "'");
    g.setting.kind = *kind;
    if (!r[2].empty()) g.setting.terminal_reader = r[2];
    if (!r[3].empty()) g.setting.smartphone_reader = r[3];
    if (auto v = ValidateSetting(g.setting); !v.empty()) throw SchemaError(at + ".setting", v.front());
    auto attack = EnumFromString<authsim::AttackKind>(r[4]);
    if (!attack) throw SchemaError(at + ".attack", "unknown attack '" + r[4] + "'");
    g.attack = *attack;
    auto verdict = EnumFromString<Verdict>(r[5]);
    if (!verdict) throw SchemaError(at + ".verdict", "unknown verdict '" + r[5] + "'");
    g.verdict = *verdict;
    g.source_anchor = r[6];
    out.push_back(std::move(g));
  }
  return out;
}

std::string RenderGolden(std::span<const GoldenCell> cells) {
  std::string out = CsvLine({std::begin(kGoldenHeader), std::end(kGoldenHeader)});
  for (const auto& g : cells) {
    out += CsvLine({g.method, std::string(ToString(g.setting.kind)),
                    g.setting.terminal_reader.value_or(""), g.setting.smartphone_reader.value_or(""),
                    std::string(ToString(g.attack)), std::string(ToString(g.verdict)),
                    g.source_anchor});
  }
  return out;
}

std::vector<std::string> CompareToGolden(std::span<const authsim::AttackOutcome> outcomes,
                                         std::span<const GoldenCell> golden) {
  std::map<std::string, const authsim::AttackOutcome*> index;
  for (const auto& o : outcomes) index[CellKey(o.method, o.setting, o.attack)] = &o;
  std::vector<std::string> diffs;
  for (const auto& g : golden) {
    const std::string key = CellKey(g.method, g.setting, g.attack);
    auto it = index.find(key);
    if (it == index.end()) {
      diffs.push_back(key + ": missing from matrix (expected " +
                      std::string(ToString(g.verdict)) + ")");
    } else if (it->second->verdict != g.verdict) {
      diffs.push_back(key + ": expected " + std::string(ToString(g.verdict)) + ", got " +
                      std::string(ToString(it->second->verdict)));
    }
  }
  return diffs;
}

}  // namespace srauth::report
