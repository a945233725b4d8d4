#pragma once

// Deterministic discrete-event simulation of attacks on 2FA/MFA flows as
// experienced through a screen reader. The modeled user acts only on what
// the reader announces; each attack script yields a verdict plus a trace of
// timestamped events.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srauth/model.hpp"

namespace srauth::authsim {

enum class AttackKind {
  kPhishingRelay,
  kConcurrentLogin,
  kNotificationFatigue,
  kShoulderSurfOtp,
  kDisplayOverlay,
  kCrossService,
  kDowngrade,
  kMisRegistration,
};

struct SimConfig {
  double fatigue_interval_s = 30.0;
  int fatigue_rounds = 20;
  std::optional<int> admin_lockout_threshold = 5;  // honored only by methods with admin_lockout
  int exhaustion_threshold = 10;  // the user accepts the push with this ordinal
  double concurrency_skew_s = 1.0;
  std::uint64_t rng_seed = 0;     // breaks ties between simultaneous arrivals
  // Headphones: one device per single-device setting wears them when
  // `single_device_headphones` is set; with two devices in use only
  // `concurrent_protected_device` does.
  bool single_device_headphones = true;
  PlatformKind concurrent_protected_device = PlatformKind::kTerminal;
};

std::vector<std::string> ValidateConfig(const SimConfig& config);

struct AttackOutcome {
  AttackKind attack = AttackKind::kPhishingRelay;
  std::string method;
  PlatformSetting setting;
  std::string profile;  // reader whose behavior decided the cell
  Verdict verdict = Verdict::kNotApplicable;
  std::vector<std::string> trace;
  int rounds_elapsed = 0;

  bool operator==(const AttackOutcome&) const = default;
};

// Whether the attack is defined for a method category at all.
bool IsApplicable(AttackKind attack, AuthCategory category);

// Throws srauth::Error for an unsupported (method, setting) pair, an invalid
// setting, or an unknown profile id. Inapplicable attacks return a
// NOT_APPLICABLE outcome.
AttackOutcome RunAttack(const AuthMethod& method, const PlatformSetting& setting,
                        std::span<const ScreenReaderProfile> profiles, AttackKind attack,
                        const SimConfig& config = {});

// Cartesian product of methods x settings x attacks, skipping cells where
// the method does not run on the setting or the attack is undefined for the
// category. Output order is (method, setting, attack) in argument order,
// independent of thread scheduling.
std::vector<AttackOutcome> RunMatrix(std::span<const AuthMethod> methods,
                                     std::span<const PlatformSetting> settings,
                                     std::span<const ScreenReaderProfile> profiles,
                                     std::span<const AttackKind> attacks,
                                     const SimConfig& config = {});
std::vector<AttackOutcome> RunMatrixSerial(std::span<const AuthMethod> methods,
                                           std::span<const PlatformSetting> settings,
                                           std::span<const ScreenReaderProfile> profiles,
                                           std::span<const AttackKind> attacks,
                                           const SimConfig& config = {});

}  // namespace srauth::authsim

namespace srauth {
SRAUTH_ENUM_NAMES(authsim::AttackKind,
                  {authsim::AttackKind::kPhishingRelay, "PHISHING_RELAY"},
                  {authsim::AttackKind::kConcurrentLogin, "CONCURRENT_LOGIN"},
                  {authsim::AttackKind::kNotificationFatigue, "NOTIFICATION_FATIGUE"},
                  {authsim::AttackKind::kShoulderSurfOtp, "SHOULDER_SURF_OTP"},
                  {authsim::AttackKind::kDisplayOverlay, "DISPLAY_OVERLAY"},
                  {authsim::AttackKind::kCrossService, "CROSS_SERVICE"},
                  {authsim::AttackKind::kDowngrade, "DOWNGRADE"},
                  {authsim::AttackKind::kMisRegistration, "MIS_REGISTRATION"});
}  // namespace srauth
