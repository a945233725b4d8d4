#include "srauth/authsim.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <deque>
#include <random>

#include "srauth/error.hpp"
#include "srauth/phonetics.hpp"

namespace srauth::authsim {
namespace {

class Trace {
 public:
  void Log(double t, const std::string& what) {
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "t=%.3f ", t);
    lines_.push_back(stamp + what);
  }
  std::vector<std::string> Take() { return std::move(lines_); }

 private:
  std::vector<std::string> lines_;
};

struct Device {
  PlatformKind platform;
  const ScreenReaderProfile* reader;
  bool headphones;
};

std::string Name(PlatformKind p) {
  return p == PlatformKind::kTerminal ? "terminal" : "smartphone";
}

// Everything a single script needs about the cell.
struct Cell {
  const AuthMethod& method;
  const PlatformSetting& setting;
  const SimConfig& config;
  std::vector<Device> devices;
  PlatformKind delivery;  // device that receives the code, push or prompt

  const Device& At(PlatformKind p) const {
    for (const auto& d : devices) {
      if (d.platform == p) return d;
    }
    throw Error("internal: no " + Name(p) + " device in setting");
  }
  const ScreenReaderProfile& DeliveryReader() const { return *At(delivery).reader; }
};

Cell MakeCell(const AuthMethod& method, const PlatformSetting& setting,
              std::span<const ScreenReaderProfile> profiles, const SimConfig& config) {
  if (auto v = ValidateSettingReaders(setting, profiles); !v.empty()) {
    std::string msg = "invalid setting for simulation:";
    for (const auto& s : v) msg += " " + s + ";";
    throw Error(msg);
  }
  if (!SupportsSetting(method, setting.kind)) {
    throw Error("method '" + method.id + "' is not supported on setting " +
                std::string(ToString(setting.kind)));
  }
  Cell cell{method, setting, config, {}, PlatformKind::kTerminal};
  switch (setting.kind) {
    case SettingKind::kTerminal:
      cell.devices.push_back({PlatformKind::kTerminal, FindProfile(profiles, *setting.terminal_reader),
                              config.single_device_headphones});
      cell.delivery = PlatformKind::kTerminal;
      break;
    case SettingKind::kSmartphone:
      cell.devices.push_back({PlatformKind::kSmartphone,
                              FindProfile(profiles, *setting.smartphone_reader),
                              config.single_device_headphones});
      cell.delivery = PlatformKind::kSmartphone;
      break;
    case SettingKind::kConcurrent: {
      const bool term_protected = config.concurrent_protected_device == PlatformKind::kTerminal;
      cell.devices.push_back({PlatformKind::kTerminal, FindProfile(profiles, *setting.terminal_reader),
                              term_protected});
      cell.devices.push_back({PlatformKind::kSmartphone,
                              FindProfile(profiles, *setting.smartphone_reader), !term_protected});
      // A method that only runs on one device delivers there.
      const auto& p = method.supported_platforms;
      cell.delivery = p.size() == 1 ? *p.begin() : method.delivery_platform;
      break;
    }
  }
  return cell;
}

// What the reader on the delivery device makes of the code.
OtpStyle EffectiveOtpStyle(const Cell& c) {
  const auto& reader = c.DeliveryReader();
  if (c.method.otp_masked) return OtpStyle::kHidden;
  if (c.method.otp_location == ElementLocation::kOutsideBrowser && !reader.reads_outside_browser) {
    return OtpStyle::kHidden;
  }
  return reader.OtpStyleFor(c.method.id);
}

// The lure every phishing script uses: the trusted domain with one letter
// doubled. Returns whether the spoken forms are indistinguishable.
bool LureIsInaudible(const AuthMethod& method, Trace& trace, double t) {
  std::string label;
  for (char ch : method.vendor.empty() ? method.id : method.vendor) {
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      label.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (label.empty()) label = "service";
  const std::string real = label + ".com";
  std::string fake = label;
  fake.insert(fake.begin() + 1, fake[std::min<std::size_t>(1, fake.size() - 1)]);
  fake += ".com";
  const double sim = phonetics::SpokenSimilarity(real, fake);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f", sim);
  trace.Log(t, "attacker sends link to " + fake + " (spoken similarity to " + real + " = " +
                   buf + ")");
  return sim >= phonetics::kDefaultThreshold;
}

// ---------------------------------------------------------------------------
// Push notification queue as the modeled user hears it.

struct Push {
  double t;
  bool from_attacker;
  bool details_readable;  // the reader speaks requester device/city
};

class NotificationQueue {
 public:
  explicit NotificationQueue(NotificationOrdering ordering) : ordering_(ordering) {}

  void Deliver(const Push& p) {
    if (ordering_ == NotificationOrdering::kNewestOverrides) {
      pending_.clear();
      pending_.push_back(p);
    } else {
      pending_.push_back(p);
    }
  }

  // The notification the reader announces first.
  const Push* Announced() const { return pending_.empty() ? nullptr : &pending_.front(); }

 private:
  NotificationOrdering ordering_;
  std::deque<Push> pending_;
};

AttackOutcome ConcurrentLogin(const Cell& c, Trace& trace) {
  const auto& reader = c.DeliveryReader();
  const bool details = c.method.shows_requester_details && reader.reads_service_name_in_prompt;
  const double skew = c.config.concurrency_skew_s;

  // The attacker times its request so that its push is the one announced:
  // after the victim's when newer pushes override, before it when the
  // oldest stays on top.
  double attacker_t = reader.notification_ordering == NotificationOrdering::kNewestOverrides
                          ? skew
                          : -skew;
  bool attacker_second = attacker_t > 0.0;
  if (skew == 0.0) {
    std::mt19937_64 rng(c.config.rng_seed);
    attacker_second = (rng() & 1U) != 0U;
    attacker_t = 0.0;
    trace.Log(0.0, std::string("simultaneous arrival, tie broken: attacker push lands ") +
                       (attacker_second ? "second" : "first"));
  }

  NotificationQueue queue(reader.notification_ordering);
  const Push victim{0.0, false, details};
  const Push attacker{attacker_t, true, details};
  const Push& first = attacker_second ? victim : attacker;
  const Push& second = attacker_second ? attacker : victim;
  for (const Push* p : {&first, &second}) {
    trace.Log(p->t, std::string(p->from_attacker ? "attacker" : "victim") +
                        " sign-in request; push delivered to " + Name(c.delivery));
    queue.Deliver(*p);
  }

  const Push* heard = queue.Announced();
  trace.Log(std::max(first.t, second.t),
            reader.id + " announces " + (heard->from_attacker ? "attacker" : "victim") +
                " push (" + std::string(ToString(reader.notification_ordering)) + ")" +
                (heard->details_readable ? " including requester device and city" : ""));

  AttackOutcome out;
  out.rounds_elapsed = 1;
  if (!heard->from_attacker) {
    trace.Log(std::max(first.t, second.t), "user approves own request");
    out.verdict = Verdict::kNotVulnerable;
  } else if (heard->details_readable) {
    trace.Log(std::max(first.t, second.t),
              "user may notice unfamiliar requester details before approving");
    out.verdict = Verdict::kPartial;
  } else {
    trace.Log(std::max(first.t, second.t), "user approves attacker push believing it is their own");
    out.verdict = Verdict::kVulnerable;
  }
  return out;
}

AttackOutcome NotificationFatigue(const Cell& c, Trace& trace) {
  const auto& reader = c.DeliveryReader();
  const SimConfig& cfg = c.config;
  // 0 means no lockout applies to this method.
  const int lockout =
      c.method.admin_lockout && cfg.admin_lockout_threshold ? *cfg.admin_lockout_threshold : 0;
  bool select_confirm = c.method.category == AuthCategory::kPushSelectConfirm;

  AttackOutcome out;
  out.verdict = Verdict::kNotVulnerable;
  int denials = 0;
  for (int round = 1; round <= cfg.fatigue_rounds; ++round) {
    const double t = cfg.fatigue_interval_s * round;
    out.rounds_elapsed = round;
    trace.Log(t, "attacker push #" + std::to_string(round) + " announced by " + reader.id +
                     (reader.notification_ordering == NotificationOrdering::kOldestOnTop && round > 1
                          ? " (earlier pushes stay on top)"
                          : ""));
    if (select_confirm) {
      trace.Log(t, "number-matching prompt; user cannot see the sign-in number and denies");
      trace.Log(t, "subsequent pushes offer plain approve/deny");
      select_confirm = false;
    } else if (round >= cfg.exhaustion_threshold) {
      trace.Log(t, "user accepts out of exhaustion");
      out.verdict = Verdict::kVulnerable;
      return out;
    } else {
      trace.Log(t, "user denies");
    }
    ++denials;
    if (lockout > 0 && denials >= lockout) {
      trace.Log(t, "administrator lockout after " + std::to_string(denials) + " denials");
      out.verdict = Verdict::kPartial;
      return out;
    }
  }
  trace.Log(cfg.fatigue_interval_s * cfg.fatigue_rounds, "attacker stops; user never accepted");
  return out;
}

AttackOutcome ShoulderSurf(const Cell& c, Trace& trace) {
  std::vector<Device> devices = c.devices;
  for (const auto& d : devices) {
    trace.Log(0.0, Name(d.platform) + " (" + d.reader->id + "): headphones " +
                       (d.headphones ? "on" : "off"));
  }
  trace.Log(0.0, "victim starts sign-in; attacker nearby requests a password reset");
  trace.Log(1.0, "one-time code for the reset reaches the victim's " + Name(c.delivery));

  bool spoken;
  if (c.method.category == AuthCategory::kOtpCall) {
    spoken = true;
    trace.Log(2.0, "code is read out by the phone call");
  } else {
    spoken = EffectiveOtpStyle(c) != OtpStyle::kHidden;
    trace.Log(2.0, spoken ? c.DeliveryReader().id + " reads the code aloud"
                          : c.DeliveryReader().id + " cannot read the code");
  }
  for (auto& d : devices) {
    if (d.platform == c.delivery && c.method.call_conflicts_with_reader && d.headphones) {
      d.headphones = false;
      trace.Log(2.0, "incoming call disconnects headphones; loudspeaker active");
    }
  }

  AttackOutcome out;
  out.rounds_elapsed = 1;
  bool leaked = false;
  for (const auto& d : devices) {
    if (d.platform == c.delivery && spoken && !d.headphones) leaked = true;
  }
  if (leaked) {
    trace.Log(3.0, "attacker overhears the code and completes the reset");
    out.verdict = Verdict::kVulnerable;
  } else {
    trace.Log(3.0, "code not audible to bystanders");
    out.verdict = Verdict::kNotVulnerable;
  }
  return out;
}

// Shared gate for relay phishing and mis-registration: the attack works to
// the degree that the victim can complete the flow on the attacker's page.
AttackOutcome RelayGate(const Cell& c, Trace& trace, const char* what) {
  AttackOutcome out;
  out.rounds_elapsed = 1;
  const bool inaudible = LureIsInaudible(c.method, trace, 0.0);
  trace.Log(1.0, std::string("user opens the lure; ") +
                     (inaudible ? "domain sounds identical" : "domain sounds different"));

  if (c.method.category == AuthCategory::kFidoMfa) {
    trace.Log(2.0, std::string("attacker relays the ") + what + " challenge; user touches the key");
    out.verdict = inaudible ? Verdict::kVulnerable : Verdict::kPartial;
    return out;
  }
  if (c.method.call_conflicts_with_reader) {
    trace.Log(2.0, "call audio collides with the reader; flow is not feasible");
    out.verdict = Verdict::kNotApplicable;
    return out;
  }
  const auto& reader = c.DeliveryReader();
  switch (EffectiveOtpStyle(c)) {
    case OtpStyle::kHidden:
      trace.Log(2.0, reader.id + " cannot convey the code; flow is not feasible");
      out.verdict = Verdict::kNotApplicable;
      return out;
    case OtpStyle::kNumericWhole:
    case OtpStyle::kNumericGrouped:
      trace.Log(2.0, reader.id + " speaks the code as a quantity; entry is error-prone");
      out.verdict = inaudible ? Verdict::kPartial : Verdict::kNotVulnerable;
      return out;
    case OtpStyle::kDigitByDigit:
      break;
  }
  if (reader.OtpEntryHindered(c.method.id)) {
    trace.Log(2.0, reader.id + " reads the code but copying it is difficult");
    out.verdict = inaudible ? Verdict::kPartial : Verdict::kNotVulnerable;
    return out;
  }
  trace.Log(2.0, "user enters the code on the lure; attacker relays it");
  out.verdict = inaudible ? Verdict::kVulnerable : Verdict::kNotVulnerable;
  return out;
}

AttackOutcome DisplayOverlay(const Cell& c, Trace& trace) {
  const auto& reader = c.DeliveryReader();
  trace.Log(0.0, "attacker draws false transaction details over the legitimate prompt");
  AttackOutcome out;
  out.rounds_elapsed = 1;
  if (reader.overlay_handling == OverlayHandling::kReadsOverlay) {
    trace.Log(1.0, reader.id + " reads the overlay; user confirms false details");
    out.verdict = Verdict::kVulnerable;
  } else {
    trace.Log(1.0, reader.id + " reads the underlying data");
    out.verdict = Verdict::kNotVulnerable;
  }
  return out;
}

AttackOutcome CrossService(const Cell& c, Trace& trace) {
  const auto& reader = c.DeliveryReader();
  trace.Log(0.0, "attacker triggers a security-key prompt for a different service");
  AttackOutcome out;
  out.rounds_elapsed = 1;
  if (reader.reads_security_prompts == PromptReading::kNone) {
    trace.Log(1.0, reader.id + " cannot read the security prompt; user touches the key");
    out.verdict = Verdict::kVulnerable;
  } else if (reader.reads_service_name_in_prompt) {
    trace.Log(1.0, reader.id + " announces the requesting service; user declines");
    out.verdict = Verdict::kNotVulnerable;
  } else {
    trace.Log(1.0, reader.id + " reads the prompt without the service name; user touches the key");
    out.verdict = Verdict::kVulnerable;
  }
  return out;
}

AttackOutcome Downgrade(const Cell& c, Trace& trace) {
  LureIsInaudible(c.method, trace, 0.0);
  trace.Log(1.0, "fake prompt offers a fallback one-time code instead of the key");
  trace.Log(2.0, c.DeliveryReader().id + " reads the fake prompt as legitimate; code is relayed");
  AttackOutcome out;
  out.rounds_elapsed = 1;
  out.verdict = Verdict::kVulnerable;
  return out;
}

bool IsOtp(AuthCategory c) {
  return c == AuthCategory::kOtpText || c == AuthCategory::kOtpCall ||
         c == AuthCategory::kOtpAuthenticator;
}

bool IsPush(AuthCategory c) {
  return c == AuthCategory::kPush || c == AuthCategory::kPushSelectConfirm;
}

}  // namespace

std::vector<std::string> ValidateConfig(const SimConfig& config) {
  std::vector<std::string> out;
  if (!(config.fatigue_interval_s > 0.0)) out.push_back("fatigue_interval_s must be positive");
  if (config.fatigue_rounds <= 0) out.push_back("fatigue_rounds must be positive");
  if (config.admin_lockout_threshold && *config.admin_lockout_threshold <= 0) {
    out.push_back("admin_lockout_threshold must be positive");
  }
  if (config.exhaustion_threshold <= 0) out.push_back("exhaustion_threshold must be positive");
  if (!(config.concurrency_skew_s >= 0.0)) out.push_back("concurrency_skew_s must be non-negative");
  return out;
}

bool IsApplicable(AttackKind attack, AuthCategory category) {
  switch (attack) {
    case AttackKind::kConcurrentLogin:
    case AttackKind::kNotificationFatigue:
      return IsPush(category);
    case AttackKind::kShoulderSurfOtp:
      return IsOtp(category);
    case AttackKind::kPhishingRelay:
      return IsOtp(category) || category == AuthCategory::kFidoMfa;
    case AttackKind::kDisplayOverlay:
    case AttackKind::kCrossService:
    case AttackKind::kDowngrade:
    case AttackKind::kMisRegistration:
      return category == AuthCategory::kFidoMfa;
  }
  return false;
}

AttackOutcome RunAttack(const AuthMethod& method, const PlatformSetting& setting,
                        std::span<const ScreenReaderProfile> profiles, AttackKind attack,
                        const SimConfig& config) {
  if (auto v = ValidateConfig(config); !v.empty()) throw Error("invalid SimConfig: " + v.front());
  const Cell cell = MakeCell(method, setting, profiles, config);

  Trace trace;
  AttackOutcome out;
  if (!IsApplicable(attack, method.category)) {
    trace.Log(0.0, std::string(ToString(attack)) + " is undefined for " +
                       std::string(ToString(method.category)));
    out.verdict = Verdict::kNotApplicable;
  } else {
    switch (attack) {
      case AttackKind::kConcurrentLogin: out = ConcurrentLogin(cell, trace); break;
      case AttackKind::kNotificationFatigue: out = NotificationFatigue(cell, trace); break;
      case AttackKind::kShoulderSurfOtp: out = ShoulderSurf(cell, trace); break;
      case AttackKind::kPhishingRelay: out = RelayGate(cell, trace, "sign-in"); break;
      case AttackKind::kMisRegistration: out = RelayGate(cell, trace, "registration"); break;
      case AttackKind::kDisplayOverlay: out = DisplayOverlay(cell, trace); break;
      case AttackKind::kCrossService: out = CrossService(cell, trace); break;
      case AttackKind::kDowngrade: out = Downgrade(cell, trace); break;
    }
  }
  out.attack = attack;
  out.method = method.id;
  out.setting = setting;
  out.profile = cell.DeliveryReader().id;
  out.trace = trace.Take();
  return out;
}

namespace {

struct CellRef {
  const AuthMethod* method;
  const PlatformSetting* setting;
  AttackKind attack;
};

std::vector<CellRef> EnumerateCells(std::span<const AuthMethod> methods,
                                    std::span<const PlatformSetting> settings,
                                    std::span<const AttackKind> attacks) {
  std::vector<CellRef> cells;
  for (const auto& m : methods) {
    for (const auto& s : settings) {
      if (!SupportsSetting(m, s.kind)) continue;
      for (auto a : attacks) {
        if (IsApplicable(a, m.category)) cells.push_back({&m, &s, a});
      }
    }
  }
  return cells;
}

}  // namespace

std::vector<AttackOutcome> RunMatrixSerial(std::span<const AuthMethod> methods,
                                           std::span<const PlatformSetting> settings,
                                           std::span<const ScreenReaderProfile> profiles,
                                           std::span<const AttackKind> attacks,
                                           const SimConfig& config) {
  std::vector<AttackOutcome> out;
  for (const auto& c : EnumerateCells(methods, settings, attacks)) {
    out.push_back(RunAttack(*c.method, *c.setting, profiles, c.attack, config));
  }
  return out;
}

std::vector<AttackOutcome> RunMatrix(std::span<const AuthMethod> methods,
                                     std::span<const PlatformSetting> settings,
                                     std::span<const ScreenReaderProfile> profiles,
                                     std::span<const AttackKind> attacks,
                                     const SimConfig& config) {
  const auto cells = EnumerateCells(methods, settings, attacks);
  std::vector<AttackOutcome> out(cells.size());
  std::vector<std::string> errors(cells.size());
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 2)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = RunAttack(*cells[i].method, *cells[i].setting, profiles, cells[i].attack, config);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
  return out;
}

}  // namespace srauth::authsim
