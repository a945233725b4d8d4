#pragma once

// Shared domain types for authentication-workflow evaluation: methods,
// platform settings, screen-reader capability profiles, ground-truth
// workflows and recorded sessions. All types are plain values; once built
// they are never mutated, so they can be shared read-only between workers.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srauth {

enum class PlatformKind { kTerminal, kSmartphone };

enum class SettingKind { kTerminal, kSmartphone, kConcurrent };

enum class AuthCategory {
  kOtpText,
  kOtpCall,
  kOtpAuthenticator,
  kPush,
  kPushSelectConfirm,
  kFidoMfa,
  kPhoneCallKeypress,
};

enum class PromptReading { kFull, kPartial, kNone };

enum class OverlayHandling { kReadsOverlay, kReadsUnderlying };

enum class NotificationOrdering { kNewestOverrides, kOldestOnTop };

// How a reader speaks a one-time code it can see.
enum class OtpStyle { kDigitByDigit, kNumericWhole, kNumericGrouped, kHidden };

enum class ElementKind {
  kInstruction,
  kOtp,
  kSecurityPrompt,
  kButton,
  kServiceName,
  kLink,
};

enum class ElementLocation {
  kInBrowser,
  kOutsideBrowser,
  kPhoneCallAudio,
  kNotification,
};

enum class Channel { kScreenReader, kPhoneCall, kSystemAudio };

enum class Verdict { kVulnerable, kPartial, kNotVulnerable, kNotApplicable };

// ---------------------------------------------------------------------------
// Enum <-> wire-name mapping. Wire names are the upper-snake identifiers used
// in every JSON/CSV file ("OTP_TEXT", "SCREEN_READER", ...).

template <class E>
struct EnumNames;

#define SRAUTH_ENUM_NAMES(E, ...)                                        \
  template <>                                                            \
  struct EnumNames<E> {                                                  \
    static constexpr auto kNames =                                       \
        std::to_array<std::pair<E, std::string_view>>({__VA_ARGS__});    \
    static constexpr std::string_view kTypeName = #E;                    \
  }

SRAUTH_ENUM_NAMES(PlatformKind, {PlatformKind::kTerminal, "TERMINAL"},
                  {PlatformKind::kSmartphone, "SMARTPHONE"});
SRAUTH_ENUM_NAMES(SettingKind, {SettingKind::kTerminal, "TERMINAL"},
                  {SettingKind::kSmartphone, "SMARTPHONE"},
                  {SettingKind::kConcurrent, "CONCURRENT"});
SRAUTH_ENUM_NAMES(AuthCategory, {AuthCategory::kOtpText, "OTP_TEXT"},
                  {AuthCategory::kOtpCall, "OTP_CALL"},
                  {AuthCategory::kOtpAuthenticator, "OTP_AUTHENTICATOR"},
                  {AuthCategory::kPush, "PUSH"},
                  {AuthCategory::kPushSelectConfirm, "PUSH_SELECT_CONFIRM"},
                  {AuthCategory::kFidoMfa, "FIDO_MFA"},
                  {AuthCategory::kPhoneCallKeypress, "PHONE_CALL_KEYPRESS"});
SRAUTH_ENUM_NAMES(PromptReading, {PromptReading::kFull, "FULL"},
                  {PromptReading::kPartial, "PARTIAL"},
                  {PromptReading::kNone, "NONE"});
SRAUTH_ENUM_NAMES(OverlayHandling,
                  {OverlayHandling::kReadsOverlay, "READS_OVERLAY"},
                  {OverlayHandling::kReadsUnderlying, "READS_UNDERLYING"});
SRAUTH_ENUM_NAMES(NotificationOrdering,
                  {NotificationOrdering::kNewestOverrides, "NEWEST_OVERRIDES"},
                  {NotificationOrdering::kOldestOnTop, "OLDEST_ON_TOP"});
SRAUTH_ENUM_NAMES(OtpStyle, {OtpStyle::kDigitByDigit, "DIGIT_BY_DIGIT"},
                  {OtpStyle::kNumericWhole, "NUMERIC_WHOLE"},
                  {OtpStyle::kNumericGrouped, "NUMERIC_GROUPED"},
                  {OtpStyle::kHidden, "HIDDEN"});
SRAUTH_ENUM_NAMES(ElementKind, {ElementKind::kInstruction, "INSTRUCTION"},
                  {ElementKind::kOtp, "OTP"},
                  {ElementKind::kSecurityPrompt, "SECURITY_PROMPT"},
                  {ElementKind::kButton, "BUTTON"},
                  {ElementKind::kServiceName, "SERVICE_NAME"},
                  {ElementKind::kLink, "LINK"});
SRAUTH_ENUM_NAMES(ElementLocation, {ElementLocation::kInBrowser, "IN_BROWSER"},
                  {ElementLocation::kOutsideBrowser, "OUTSIDE_BROWSER"},
                  {ElementLocation::kPhoneCallAudio, "PHONE_CALL_AUDIO"},
                  {ElementLocation::kNotification, "NOTIFICATION"});
SRAUTH_ENUM_NAMES(Channel, {Channel::kScreenReader, "SCREEN_READER"},
                  {Channel::kPhoneCall, "PHONE_CALL"},
                  {Channel::kSystemAudio, "SYSTEM_AUDIO"});
SRAUTH_ENUM_NAMES(Verdict, {Verdict::kVulnerable, "VULNERABLE"},
                  {Verdict::kPartial, "PARTIAL"},
                  {Verdict::kNotVulnerable, "NOT_VULNERABLE"},
                  {Verdict::kNotApplicable, "NOT_APPLICABLE"});

template <class E>
constexpr std::string_view ToString(E value) {
  for (const auto& [v, name] : EnumNames<E>::kNames) {
    if (v == value) return name;
  }
  return "?";
}

template <class E>
constexpr std::optional<E> EnumFromString(std::string_view name) {
  for (const auto& [v, n] : EnumNames<E>::kNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

template <class E>
constexpr auto AllValues() {
  std::array<E, EnumNames<E>::kNames.size()> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = EnumNames<E>::kNames[i].first;
  return out;
}

// ---------------------------------------------------------------------------

struct AuthMethod {
  std::string id;
  AuthCategory category = AuthCategory::kOtpText;
  std::string vendor;
  std::set<PlatformKind> supported_platforms;

  // Attributes consumed by the attack simulator. All optional on the wire.
  ElementLocation otp_location = ElementLocation::kInBrowser;
  bool otp_masked = false;                 // code is drawn as asterisks
  PlatformKind delivery_platform = PlatformKind::kSmartphone;  // where the code/push lands when both devices are in use
  bool shows_requester_details = false;    // push carries device/city of the requester
  bool admin_lockout = false;              // repeated denials can lock the account
  bool call_conflicts_with_reader = false; // call audio competes with the reader

  bool operator==(const AuthMethod&) const = default;
};

struct PlatformSetting {
  SettingKind kind = SettingKind::kTerminal;
  std::optional<std::string> terminal_reader;
  std::optional<std::string> smartphone_reader;

  bool operator==(const PlatformSetting&) const = default;
  auto operator<=>(const PlatformSetting&) const = default;
};

// Per-method deviations from a reader's general behavior.
struct MethodOverride {
  std::optional<OtpStyle> otp_pronunciation;
  bool otp_entry_hindered = false;  // code is spoken but hard to copy/enter

  bool operator==(const MethodOverride&) const = default;
};

struct ScreenReaderProfile {
  std::string id;
  PlatformKind platform = PlatformKind::kTerminal;
  bool reads_outside_browser = true;
  PromptReading reads_security_prompts = PromptReading::kFull;
  bool reads_service_name_in_prompt = false;
  OverlayHandling overlay_handling = OverlayHandling::kReadsOverlay;
  NotificationOrdering notification_ordering = NotificationOrdering::kNewestOverrides;
  OtpStyle otp_pronunciation = OtpStyle::kDigitByDigit;
  int default_speech_rate_pct = 50;
  std::map<std::string, MethodOverride> method_overrides;

  // Effective pronunciation for one method, honoring overrides.
  OtpStyle OtpStyleFor(std::string_view method_id) const;
  bool OtpEntryHindered(std::string_view method_id) const;

  bool operator==(const ScreenReaderProfile&) const = default;
};

struct CriticalElement {
  ElementKind kind = ElementKind::kInstruction;
  std::string text;
  ElementLocation location = ElementLocation::kInBrowser;
  bool required = true;

  bool operator==(const CriticalElement&) const = default;
};

struct WorkflowSpec {
  std::string id;
  std::string method;
  PlatformSetting setting;
  std::string full_text;
  std::vector<CriticalElement> elements;
  std::optional<double> verification_timeout_s;

  const CriticalElement* OtpElement() const;

  bool operator==(const WorkflowSpec&) const = default;
};

struct TranscriptEvent {
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  Channel channel = Channel::kScreenReader;
  std::string text;

  double duration() const { return t_end_s - t_start_s; }
  bool operator==(const TranscriptEvent&) const = default;
};

struct SessionRecord {
  std::string id;
  std::string workflow;
  PlatformSetting setting;
  int speech_rate_pct = 50;
  std::vector<TranscriptEvent> events;
  bool headphones_on_terminal = false;
  bool headphones_on_smartphone = false;

  bool operator==(const SessionRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Validation. Each returns human-readable violations; empty means valid.

bool IsValidOtp(std::string_view otp);
std::vector<std::string> OtpGroups(std::string_view otp);
std::string OtpDigits(std::string_view otp);

bool SupportsSetting(const AuthMethod& method, SettingKind kind);

std::vector<std::string> ValidateSetting(const PlatformSetting& setting);
std::vector<std::string> ValidateSettingReaders(
    const PlatformSetting& setting, std::span<const ScreenReaderProfile> profiles);
std::vector<std::string> ValidateProfile(const ScreenReaderProfile& profile);
std::vector<std::string> ValidateCatalog(std::span<const AuthMethod> catalog);

// Invariants that do not need the method catalog.
std::vector<std::string> ValidateWorkflowShape(const WorkflowSpec& spec);
std::vector<std::string> ValidateWorkflow(const WorkflowSpec& spec,
                                          std::span<const AuthMethod> catalog);
std::vector<std::string> ValidateSession(const SessionRecord& session);

// SCREEN_READER event texts in timeline order, single-space separated.
std::string FullTranscript(const SessionRecord& session);

const AuthMethod* FindMethod(std::span<const AuthMethod> catalog, std::string_view id);
const ScreenReaderProfile* FindProfile(std::span<const ScreenReaderProfile> profiles,
                                       std::string_view id);

// Readable label for a setting, e.g. "jaws" or "jaws+voiceover".
std::string ReaderKey(const PlatformSetting& setting);

// Millisecond rounding applied to every timestamp that enters the model.
double RoundToMillis(double seconds);

}  // namespace srauth
