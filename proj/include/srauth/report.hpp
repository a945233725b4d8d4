#pragma once

// Rendering of analysis and simulation results, and the golden verdict file.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srauth/analyzer.hpp"
#include "srauth/authsim.hpp"
#include "srauth/json_io.hpp"

namespace srauth::report {

enum class Format { kJson, kCsv, kMarkdown };

std::string_view Extension(Format f);  // "json", "csv", "md"
std::optional<Format> FormatFromString(std::string_view s);

// Fractions are stored; percentages rendered with two decimals.
std::string Percent(double fraction);

// UTC ISO-8601, second resolution.
std::string UtcTimestamp();

// Options shared by every renderer. An empty `generated_at` omits the field,
// which is what --deterministic asks for.
struct RenderOptions {
  std::string generated_at;
};

Json ToJson(const analyzer::IssueReport& r);
std::string RenderReport(const analyzer::IssueReport& r, const RenderOptions& opt);

// Method x reader matrices over a batch of reports. Rows and columns are
// sorted; a cell holds the union of codes seen for that pair, or the mean
// comprehensibility.
struct Matrix {
  std::string title;
  std::string row_label;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> cells;  // nullopt: no session

  const std::optional<std::string>& At(std::string_view row, std::string_view column) const;
};

Matrix IssueMatrix(std::span<const analyzer::IssueReport> reports);
Matrix ComprehensibilityMatrix(std::span<const analyzer::IssueReport> reports);

std::string RenderMatrix(const Matrix& m, Format f, const RenderOptions& opt);

// Verdict matrix, one row per outcome in the given order.
std::string RenderOutcomes(std::span<const authsim::AttackOutcome> outcomes, Format f,
                           const RenderOptions& opt);

// Minimal RFC 4180 reader/writer: comma separated, double-quote escaping,
// CRLF or LF line ends.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);
std::string CsvField(std::string_view field);

struct GoldenCell {
  std::string method;
  PlatformSetting setting;
  authsim::AttackKind attack = authsim::AttackKind::kPhishingRelay;
  Verdict verdict = Verdict::kNotApplicable;
  std::string source_anchor;
};

// Columns: method, setting, terminal_reader, smartphone_reader, attack,
// verdict, source_anchor. Throws SchemaError naming "row N.column".
std::vector<GoldenCell> ParseGolden(std::string_view csv);
std::string RenderGolden(std::span<const GoldenCell> cells);

// One line per golden cell that is missing from `outcomes` or disagrees.
std::vector<std::string> CompareToGolden(std::span<const authsim::AttackOutcome> outcomes,
                                         std::span<const GoldenCell> golden);

}  // namespace srauth::report
