#pragma once

// Communicability failure detection for a recorded traversal of an
// authentication workflow:
//
//   CBI    screen-reader speech overlaps another audio source (e.g. OTP call)
//   NPO    the one-time code is spoken as a quantity, not digit by digit
//   UCO    the one-time code is never spoken
//   UCSP   a required security prompt is (mostly) not spoken
//   UCEOB  the reader cannot reach a required element outside the browser

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srauth/model.hpp"
#include "srauth/numberspeak.hpp"
#include "srauth/similarity.hpp"

namespace srauth::analyzer {

enum class IssueCode { kCbi, kNpo, kUco, kUcsp, kUceob };

std::string_view ToString(IssueCode code);
std::optional<IssueCode> IssueCodeFromString(std::string_view s);

struct IssueFinding {
  IssueCode code = IssueCode::kCbi;
  std::string evidence;
  std::vector<numberspeak::TokenSpan> spans;
};

struct AnalyzerConfig {
  double epsilon_overlap_s = 0.5;  // CBI needs strictly more overlap than this
  double tau_prompt = 0.6;         // UCSP when prompt token recall is below this
};

struct IssueReport {
  std::string session_id;
  std::string workflow_id;
  std::string method;
  std::string profile_id;
  std::string reader_key;
  std::vector<IssueFinding> findings;  // at most one per code, in code order
  similarity::SimilarityResult comprehensibility;
  double speaking_time_s = 0.0;
  bool exceeds_verification_time = false;

  bool Has(IssueCode code) const;
  // Codes joined with '+', empty when clean; e.g. "UCO" or "CBI+NPO".
  std::string CodeSet() const;
};

std::optional<IssueFinding> DetectCbi(const SessionRecord& session,
                                      const AnalyzerConfig& config = {});
std::optional<IssueFinding> DetectNpo(const SessionRecord& session, const WorkflowSpec& workflow);
std::optional<IssueFinding> DetectUco(const SessionRecord& session, const WorkflowSpec& workflow);
std::optional<IssueFinding> DetectUcsp(const SessionRecord& session, const WorkflowSpec& workflow,
                                       const AnalyzerConfig& config = {});
std::optional<IssueFinding> DetectUceob(const WorkflowSpec& workflow,
                                        const ScreenReaderProfile& profile);

// |tokens(element) ∩ tokens(transcript)| / |tokens(element)| over token sets.
double TokenSetRecall(std::string_view element_text, std::string_view transcript);

// Runs every detector and scores comprehensibility of the full transcript
// against workflow.full_text. When UCEOB fires, failures of the OTP or of
// security prompts located outside the browser are attributed to UCEOB
// alone. Throws srauth::Error when the session, workflow and profile ids do
// not line up.
IssueReport Analyze(const SessionRecord& session, const WorkflowSpec& workflow,
                    const ScreenReaderProfile& profile, const AnalyzerConfig& config = {});

// The profile that governs a session: the terminal reader for TERMINAL and
// CONCURRENT settings, the smartphone reader otherwise.
std::optional<std::string> GoverningReader(const PlatformSetting& setting);

struct AnalysisJob {
  const SessionRecord* session = nullptr;
  const WorkflowSpec* workflow = nullptr;
  const ScreenReaderProfile* profile = nullptr;
};

// Batch analysis; reports come back in job order.
std::vector<IssueReport> AnalyzeBatch(std::span<const AnalysisJob> jobs,
                                      const AnalyzerConfig& config = {});
std::vector<IssueReport> AnalyzeBatchSerial(std::span<const AnalysisJob> jobs,
                                            const AnalyzerConfig& config = {});

}  // namespace srauth::analyzer
