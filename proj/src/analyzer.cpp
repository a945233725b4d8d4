#include "srauth/analyzer.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "srauth/error.hpp"

namespace srauth::analyzer {
namespace {

std::string FormatSeconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

}  // namespace

std::string_view ToString(IssueCode code) {
  switch (code) {
    case IssueCode::kCbi: return "CBI";
    case IssueCode::kNpo: return "NPO";
    case IssueCode::kUco: return "UCO";
    case IssueCode::kUcsp: return "UCSP";
    case IssueCode::kUceob: return "UCEOB";
  }
  return "?";
}

std::optional<IssueCode> IssueCodeFromString(std::string_view s) {
  for (auto c : {IssueCode::kCbi, IssueCode::kNpo, IssueCode::kUco, IssueCode::kUcsp,
                 IssueCode::kUceob}) {
    if (ToString(c) == s) return c;
  }
  return std::nullopt;
}

bool IssueReport::Has(IssueCode code) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const IssueFinding& f) { return f.code == code; });
}

std::string IssueReport::CodeSet() const {
  std::string out;
  for (const auto& f : findings) {
    if (!out.empty()) out += '+';
    out += ToString(f.code);
  }
  return out;
}

std::optional<IssueFinding> DetectCbi(const SessionRecord& session, const AnalyzerConfig& config) {
  double best = 0.0;
  std::size_t best_sr = 0, best_other = 0;
  const auto& ev = session.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].channel != Channel::kScreenReader) continue;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (ev[j].channel == Channel::kScreenReader) continue;
      const double overlap = std::min(ev[i].t_end_s, ev[j].t_end_s) -
                             std::max(ev[i].t_start_s, ev[j].t_start_s);
      if (overlap > best) {
        best = overlap;
        best_sr = i;
        best_other = j;
      }
    }
  }
  if (!(best > config.epsilon_overlap_s)) return std::nullopt;
  IssueFinding f;
  f.code = IssueCode::kCbi;
  f.evidence = "screen reader event " + std::to_string(best_sr) + " overlaps " +
               std::string(srauth::ToString(ev[best_other].channel)) + " event " +
               std::to_string(best_other) + " by " + FormatSeconds(best) + " s";
  f.spans.push_back({best_sr, 0, similarity::Tokenize(ev[best_sr].text).size()});
  f.spans.push_back({best_other, 0, similarity::Tokenize(ev[best_other].text).size()});
  return f;
}

std::optional<IssueFinding> DetectNpo(const SessionRecord& session, const WorkflowSpec& workflow) {
  const CriticalElement* otp = workflow.OtpElement();
  if (otp == nullptr) return std::nullopt;
  const auto p = numberspeak::ClassifyOtp(session, otp->text);
  if (p.style != numberspeak::Pronunciation::kNumericWhole &&
      p.style != numberspeak::Pronunciation::kNumericGrouped) {
    return std::nullopt;
  }
  IssueFinding f;
  f.code = IssueCode::kNpo;
  f.evidence = "OTP \"" + otp->text + "\" spoken as " + std::string(numberspeak::ToString(p.style));
  if (p.matched_span) f.spans.push_back(*p.matched_span);
  return f;
}

std::optional<IssueFinding> DetectUco(const SessionRecord& session, const WorkflowSpec& workflow) {
  const CriticalElement* otp = workflow.OtpElement();
  if (otp == nullptr) return std::nullopt;
  const auto p = numberspeak::ClassifyOtp(session, otp->text);
  if (p.style != numberspeak::Pronunciation::kAbsent) return std::nullopt;
  IssueFinding f;
  f.code = IssueCode::kUco;
  f.evidence = "OTP \"" + otp->text + "\" never spoken by the screen reader";
  return f;
}

double TokenSetRecall(std::string_view element_text, std::string_view transcript) {
  const auto el = similarity::Tokenize(element_text);
  const std::set<std::string> want(el.begin(), el.end());
  if (want.empty()) return 1.0;
  const auto tr = similarity::Tokenize(transcript);
  const std::set<std::string> have(tr.begin(), tr.end());
  std::size_t hit = 0;
  for (const auto& t : want) hit += have.count(t);
  return static_cast<double>(hit) / static_cast<double>(want.size());
}

std::optional<IssueFinding> DetectUcsp(const SessionRecord& session, const WorkflowSpec& workflow,
                                       const AnalyzerConfig& config) {
  const std::string transcript = FullTranscript(session);
  std::optional<IssueFinding> out;
  for (const auto& e : workflow.elements) {
    if (e.kind != ElementKind::kSecurityPrompt || !e.required) continue;
    const double recall = TokenSetRecall(e.text, transcript);
    if (recall >= config.tau_prompt) continue;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f < %.3f", recall, config.tau_prompt);
    const std::string line = "security prompt \"" + e.text + "\" recall " + buf;
    if (!out) {
      out = IssueFinding{IssueCode::kUcsp, line, {}};
    } else {
      out->evidence += "; " + line;
    }
  }
  return out;
}

std::optional<IssueFinding> DetectUceob(const WorkflowSpec& workflow,
                                        const ScreenReaderProfile& profile) {
  if (profile.reads_outside_browser) return std::nullopt;
  for (const auto& e : workflow.elements) {
    if (e.required && e.location == ElementLocation::kOutsideBrowser) {
      return IssueFinding{IssueCode::kUceob,
                          "reader '" + profile.id + "' cannot reach " +
                              std::string(srauth::ToString(e.kind)) + " \"" + e.text +
                              "\" outside the browser",
                          {}};
    }
  }
  return std::nullopt;
}

std::optional<std::string> GoverningReader(const PlatformSetting& setting) {
  if (setting.kind == SettingKind::kSmartphone) return setting.smartphone_reader;
  return setting.terminal_reader;
}

IssueReport Analyze(const SessionRecord& session, const WorkflowSpec& workflow,
                    const ScreenReaderProfile& profile, const AnalyzerConfig& config) {
  if (session.workflow != workflow.id) {
    throw Error("id mismatch: session '" + session.id + "' references workflow '" +
                session.workflow + "', got '" + workflow.id + "'");
  }
  if (profile.id != session.setting.terminal_reader.value_or("") &&
      profile.id != session.setting.smartphone_reader.value_or("")) {
    throw Error("id mismatch: profile '" + profile.id + "' is not a reader of session '" +
                session.id + "'");
  }

  IssueReport r;
  r.session_id = session.id;
  r.workflow_id = workflow.id;
  r.method = workflow.method;
  r.profile_id = profile.id;
  r.reader_key = ReaderKey(session.setting);

  const auto uceob = DetectUceob(workflow, profile);

  // Elements the reader cannot reach are reported once, as UCEOB.
  WorkflowSpec reachable = workflow;
  if (uceob) {
    std::erase_if(reachable.elements, [](const CriticalElement& e) {
      return e.required && e.location == ElementLocation::kOutsideBrowser;
    });
  }

  if (auto cbi = DetectCbi(session, config)) r.findings.push_back(std::move(*cbi));
  if (auto npo = DetectNpo(session, reachable)) r.findings.push_back(std::move(*npo));
  if (auto uco = DetectUco(session, reachable)) r.findings.push_back(std::move(*uco));
  if (auto ucsp = DetectUcsp(session, reachable, config)) r.findings.push_back(std::move(*ucsp));
  if (uceob) r.findings.push_back(*uceob);

  r.comprehensibility = similarity::Comprehensibility(workflow.full_text, FullTranscript(session));
  for (const auto& e : session.events) {
    if (e.channel == Channel::kScreenReader) r.speaking_time_s += e.duration();
  }
  r.speaking_time_s = RoundToMillis(r.speaking_time_s);
  r.exceeds_verification_time =
      workflow.verification_timeout_s && r.speaking_time_s > *workflow.verification_timeout_s;
  return r;
}

std::vector<IssueReport> AnalyzeBatchSerial(std::span<const AnalysisJob> jobs,
                                            const AnalyzerConfig& config) {
  std::vector<IssueReport> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(Analyze(*j.session, *j.workflow, *j.profile, config));
  return out;
}

std::vector<IssueReport> AnalyzeBatch(std::span<const AnalysisJob> jobs,
                                      const AnalyzerConfig& config) {
  std::vector<IssueReport> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // Exceptions must not escape an OpenMP region.
    try {
      out[i] = Analyze(*jobs[i].session, *jobs[i].workflow, *jobs[i].profile, config);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
  return out;
}

}  // namespace srauth::analyzer
