#include "srauth/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace srauth {

OtpStyle ScreenReaderProfile::OtpStyleFor(std::string_view method_id) const {
  auto it = method_overrides.find(std::string(method_id));
  if (it != method_overrides.end() && it->second.otp_pronunciation) {
    return *it->second.otp_pronunciation;
  }
  return otp_pronunciation;
}

bool ScreenReaderProfile::OtpEntryHindered(std::string_view method_id) const {
  auto it = method_overrides.find(std::string(method_id));
  return it != method_overrides.end() && it->second.otp_entry_hindered;
}

const CriticalElement* WorkflowSpec::OtpElement() const {
  for (const auto& e : elements) {
    if (e.kind == ElementKind::kOtp) return &e;
  }
  return nullptr;
}

// Digits with optional single spaces between non-empty groups: "123456",
// "123 456". No leading/trailing/double spaces.
bool IsValidOtp(std::string_view otp) {
  if (otp.empty()) return false;
  bool prev_space = true;
  for (char c : otp) {
    if (c == ' ') {
      if (prev_space) return false;
      prev_space = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      prev_space = false;
    } else {
      return false;
    }
  }
  return !prev_space;
}

std::vector<std::string> OtpGroups(std::string_view otp) {
  std::vector<std::string> groups;
  std::string cur;
  for (char c : otp) {
    if (c == ' ') {
      if (!cur.empty()) groups.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) groups.push_back(std::move(cur));
  return groups;
}

std::string OtpDigits(std::string_view otp) {
  std::string out;
  for (char c : otp) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

bool SupportsSetting(const AuthMethod& method, SettingKind kind) {
  const auto& p = method.supported_platforms;
  switch (kind) {
    case SettingKind::kTerminal:
      return p.contains(PlatformKind::kTerminal);
    case SettingKind::kSmartphone:
      return p.contains(PlatformKind::kSmartphone);
    case SettingKind::kConcurrent:
      // Both devices are present, so a method on either one is usable.
      return !p.empty();
  }
  return false;
}

std::vector<std::string> ValidateSetting(const PlatformSetting& setting) {
  std::vector<std::string> out;
  const bool has_t = setting.terminal_reader.has_value();
  const bool has_s = setting.smartphone_reader.has_value();
  if (has_t && setting.terminal_reader->empty()) out.push_back("setting: terminal_reader is empty");
  if (has_s && setting.smartphone_reader->empty()) out.push_back("setting: smartphone_reader is empty");
  switch (setting.kind) {
    case SettingKind::kTerminal:
      if (!has_t) out.push_back("setting: TERMINAL requires terminal_reader");
      if (has_s) out.push_back("setting: TERMINAL forbids smartphone_reader");
      break;
    case SettingKind::kSmartphone:
      if (!has_s) out.push_back("setting: SMARTPHONE requires smartphone_reader");
      if (has_t) out.push_back("setting: SMARTPHONE forbids terminal_reader");
      break;
    case SettingKind::kConcurrent:
      if (!has_t) out.push_back("setting: CONCURRENT requires terminal_reader");
      if (!has_s) out.push_back("setting: CONCURRENT requires smartphone_reader");
      break;
  }
  return out;
}

std::vector<std::string> ValidateSettingReaders(
    const PlatformSetting& setting, std::span<const ScreenReaderProfile> profiles) {
  std::vector<std::string> out = ValidateSetting(setting);
  auto check = [&](const std::optional<std::string>& id, PlatformKind want,
                   std::string_view slot) {
    if (!id) return;
    const auto* p = FindProfile(profiles, *id);
    if (p == nullptr) {
      out.push_back("setting: unknown profile id '" + *id + "'");
    } else if (p->platform != want) {
      out.push_back("setting: profile '" + *id + "' is a " +
                    std::string(ToString(p->platform)) + " reader and cannot be " +
                    std::string(slot));
    }
  };
  check(setting.terminal_reader, PlatformKind::kTerminal, "terminal_reader");
  check(setting.smartphone_reader, PlatformKind::kSmartphone, "smartphone_reader");
  return out;
}

std::vector<std::string> ValidateProfile(const ScreenReaderProfile& profile) {
  std::vector<std::string> out;
  if (profile.id.empty()) out.push_back("profile: id is empty");
  if (profile.default_speech_rate_pct < 1 || profile.default_speech_rate_pct > 100) {
    out.push_back("profile '" + profile.id + "': default_speech_rate_pct " +
                  std::to_string(profile.default_speech_rate_pct) + " outside [1,100]");
  }
  return out;
}

std::vector<std::string> ValidateCatalog(std::span<const AuthMethod> catalog) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& m : catalog) {
    if (m.id.empty()) {
      out.push_back("catalog: method with empty id");
    } else if (!seen.insert(m.id).second) {
      out.push_back("catalog: duplicate method id '" + m.id + "'");
    }
    if (m.supported_platforms.empty()) {
      out.push_back("catalog: method '" + m.id + "' has no supported_platforms");
    }
  }
  return out;
}

std::vector<std::string> ValidateWorkflowShape(const WorkflowSpec& spec) {
  std::vector<std::string> out;
  if (spec.id.empty()) out.push_back("workflow: id is empty");
  if (spec.method.empty()) out.push_back("workflow: method is empty");
  for (auto& v : ValidateSetting(spec.setting)) out.push_back("workflow " + v);
  if (spec.verification_timeout_s && !(*spec.verification_timeout_s > 0.0)) {
    out.push_back("workflow: verification_timeout_s must be positive");
  }
  int otp_count = 0;
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    const auto& e = spec.elements[i];
    const std::string label = "element[" + std::to_string(i) + "] " +
                              std::string(ToString(e.kind)) + " \"" + e.text + "\"";
    if (e.text.empty()) {
      out.push_back(label + ": text is empty");
      continue;
    }
    if (e.kind == ElementKind::kOtp) {
      ++otp_count;
      if (!IsValidOtp(e.text)) {
        out.push_back(label + ": OTP must be digits with optional single-space groups");
      }
    }
    if (e.location != ElementLocation::kPhoneCallAudio &&
        spec.full_text.find(e.text) == std::string::npos) {
      out.push_back(label + ": text does not occur in full_text");
    }
  }
  if (otp_count > 1) {
    out.push_back("workflow: " + std::to_string(otp_count) + " OTP elements (at most one allowed)");
  }
  return out;
}

std::vector<std::string> ValidateWorkflow(const WorkflowSpec& spec,
                                          std::span<const AuthMethod> catalog) {
  std::vector<std::string> out = ValidateWorkflowShape(spec);
  if (spec.method.empty()) return out;
  const AuthMethod* m = FindMethod(catalog, spec.method);
  if (m == nullptr) {
    out.push_back("workflow: method '" + spec.method + "' not in catalog");
  } else if (!SupportsSetting(*m, spec.setting.kind)) {
    out.push_back("workflow: method '" + spec.method + "' does not support setting " +
                  std::string(ToString(spec.setting.kind)));
  }
  return out;
}

std::vector<std::string> ValidateSession(const SessionRecord& session) {
  std::vector<std::string> out;
  if (session.id.empty()) out.push_back("session: id is empty");
  if (session.workflow.empty()) out.push_back("session: workflow is empty");
  for (auto& v : ValidateSetting(session.setting)) out.push_back("session " + v);
  if (session.speech_rate_pct < 1 || session.speech_rate_pct > 100) {
    out.push_back("session: speech_rate_pct " + std::to_string(session.speech_rate_pct) +
                  " outside [1,100]");
  }
  for (std::size_t i = 0; i < session.events.size(); ++i) {
    const auto& e = session.events[i];
    const std::string label = "event[" + std::to_string(i) + "]";
    if (!(e.t_start_s >= 0.0)) out.push_back(label + ": t_start_s is negative");
    if (!(e.t_end_s > e.t_start_s)) out.push_back(label + ": t_end_s must exceed t_start_s");
    if (e.text.empty()) out.push_back(label + ": text is empty");
    if (i > 0 && e.t_start_s < session.events[i - 1].t_start_s) {
      out.push_back(label + ": events not sorted by t_start_s");
    }
  }
  return out;
}

std::string FullTranscript(const SessionRecord& session) {
  std::string out;
  for (const auto& e : session.events) {
    if (e.channel != Channel::kScreenReader) continue;
    if (!out.empty()) out.push_back(' ');
    out += e.text;
  }
  return out;
}

const AuthMethod* FindMethod(std::span<const AuthMethod> catalog, std::string_view id) {
  auto it = std::find_if(catalog.begin(), catalog.end(),
                         [&](const AuthMethod& m) { return m.id == id; });
  return it == catalog.end() ? nullptr : &*it;
}

const ScreenReaderProfile* FindProfile(std::span<const ScreenReaderProfile> profiles,
                                       std::string_view id) {
  auto it = std::find_if(profiles.begin(), profiles.end(),
                         [&](const ScreenReaderProfile& p) { return p.id == id; });
  return it == profiles.end() ? nullptr : &*it;
}

std::string ReaderKey(const PlatformSetting& setting) {
  switch (setting.kind) {
    case SettingKind::kTerminal:
      return setting.terminal_reader.value_or("");
    case SettingKind::kSmartphone:
      return setting.smartphone_reader.value_or("");
    case SettingKind::kConcurrent:
      return setting.terminal_reader.value_or("") + "+" + setting.smartphone_reader.value_or("");
  }
  return {};
}

double RoundToMillis(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

}  // namespace srauth
