#include "srauth/json_io.hpp"

#include <fstream>
#include <sstream>

#include "srauth/error.hpp"

namespace srauth {
namespace {

std::string Join(const std::string& path, const std::string& field) {
  return path.empty() ? field : path + "." + field;
}

const Json& Require(const Json& j, const std::string& path, const std::string& field) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError(Join(path, field), "missing required field");
  return *it;
}

std::string GetString(const Json& j, const std::string& path, const std::string& field) {
  const Json& v = Require(j, path, field);
  if (!v.is_string()) throw SchemaError(Join(path, field), "expected a string");
  return v.get<std::string>();
}

bool GetBool(const Json& j, const std::string& path, const std::string& field) {
  const Json& v = Require(j, path, field);
  if (!v.is_boolean()) throw SchemaError(Join(path, field), "expected a boolean");
  return v.get<bool>();
}

double GetNumber(const Json& j, const std::string& path, const std::string& field) {
  const Json& v = Require(j, path, field);
  if (!v.is_number()) throw SchemaError(Join(path, field), "expected a number");
  return v.get<double>();
}

int GetInt(const Json& j, const std::string& path, const std::string& field) {
  const Json& v = Require(j, path, field);
  if (!v.is_number_integer()) throw SchemaError(Join(path, field), "expected an integer");
  return v.get<int>();
}

template <class E>
E ParseEnumValue(const Json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where, "expected a string");
  auto e = EnumFromString<E>(v.get<std::string>());
  if (!e) {
    std::string allowed;
    for (const auto& [_, n] : EnumNames<E>::kNames) {
      allowed += allowed.empty() ? "" : ", ";
      allowed += n;
    }
    throw SchemaError(where, "unknown value '" + v.get<std::string>() + "' (expected one of " +
                                 allowed + ")");
  }
  return *e;
}

template <class E>
E GetEnum(const Json& j, const std::string& path, const std::string& field) {
  return ParseEnumValue<E>(Require(j, path, field), Join(path, field));
}

bool Has(const Json& j, const std::string& field) {
  auto it = j.find(field);
  return it != j.end() && !it->is_null();
}

template <class T, class F>
T Optional(const Json& j, const std::string& field, T fallback, F&& get) {
  return Has(j, field) ? get() : fallback;
}

std::optional<std::string> OptString(const Json& j, const std::string& path,
                                     const std::string& field) {
  if (!Has(j, field)) return std::nullopt;
  return GetString(j, path, field);
}

const Json& RequireArray(const Json& j, const std::string& path, const std::string& field) {
  const Json& v = Require(j, path, field);
  if (!v.is_array()) throw SchemaError(Join(path, field), "expected an array");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

Json ToJson(const AuthMethod& m) {
  Json platforms = Json::array();
  for (auto p : m.supported_platforms) platforms.push_back(ToString(p));
  return Json{{"id", m.id},
              {"category", ToString(m.category)},
              {"vendor", m.vendor},
              {"supported_platforms", platforms},
              {"otp_location", ToString(m.otp_location)},
              {"otp_masked", m.otp_masked},
              {"delivery_platform", ToString(m.delivery_platform)},
              {"shows_requester_details", m.shows_requester_details},
              {"admin_lockout", m.admin_lockout},
              {"call_conflicts_with_reader", m.call_conflicts_with_reader}};
}

Json ToJson(const PlatformSetting& s) {
  Json j{{"kind", ToString(s.kind)}};
  if (s.terminal_reader) j["terminal_reader"] = *s.terminal_reader;
  if (s.smartphone_reader) j["smartphone_reader"] = *s.smartphone_reader;
  return j;
}

Json ToJson(const ScreenReaderProfile& p) {
  Json j{{"id", p.id},
         {"platform", ToString(p.platform)},
         {"reads_outside_browser", p.reads_outside_browser},
         {"reads_security_prompts", ToString(p.reads_security_prompts)},
         {"reads_service_name_in_prompt", p.reads_service_name_in_prompt},
         {"overlay_handling", ToString(p.overlay_handling)},
         {"notification_ordering", ToString(p.notification_ordering)},
         {"otp_pronunciation", ToString(p.otp_pronunciation)},
         {"default_speech_rate_pct", p.default_speech_rate_pct}};
  if (!p.method_overrides.empty()) {
    Json ov = Json::object();
    for (const auto& [method, o] : p.method_overrides) {
      Json entry = Json::object();
      if (o.otp_pronunciation) entry["otp_pronunciation"] = ToString(*o.otp_pronunciation);
      if (o.otp_entry_hindered) entry["otp_entry_hindered"] = true;
      ov[method] = entry;
    }
    j["method_overrides"] = ov;
  }
  return j;
}

Json ToJson(const CriticalElement& e) {
  return Json{{"kind", ToString(e.kind)},
              {"text", e.text},
              {"location", ToString(e.location)},
              {"required", e.required}};
}

Json ToJson(const WorkflowSpec& w) {
  Json elements = Json::array();
  for (const auto& e : w.elements) elements.push_back(ToJson(e));
  Json j{{"id", w.id},
         {"method", w.method},
         {"setting", ToJson(w.setting)},
         {"full_text", w.full_text},
         {"elements", elements}};
  if (w.verification_timeout_s) j["verification_timeout_s"] = *w.verification_timeout_s;
  return j;
}

Json ToJson(const TranscriptEvent& e) {
  return Json{{"t_start_s", e.t_start_s},
              {"t_end_s", e.t_end_s},
              {"channel", ToString(e.channel)},
              {"text", e.text}};
}

Json ToJson(const SessionRecord& s) {
  Json events = Json::array();
  for (const auto& e : s.events) events.push_back(ToJson(e));
  return Json{{"id", s.id},
              {"workflow", s.workflow},
              {"setting", ToJson(s.setting)},
              {"speech_rate_pct", s.speech_rate_pct},
              {"events", events},
              {"headphones_on_terminal", s.headphones_on_terminal},
              {"headphones_on_smartphone", s.headphones_on_smartphone}};
}

// ---------------------------------------------------------------------------

AuthMethod AuthMethodFromJson(const Json& j, const std::string& path) {
  AuthMethod m;
  m.id = GetString(j, path, "id");
  m.category = GetEnum<AuthCategory>(j, path, "category");
  m.vendor = Optional(j, "vendor", std::string{}, [&] { return GetString(j, path, "vendor"); });
  const Json& plats = RequireArray(j, path, "supported_platforms");
  for (std::size_t i = 0; i < plats.size(); ++i) {
    m.supported_platforms.insert(ParseEnumValue<PlatformKind>(
        plats[i], Join(path, "supported_platforms[" + std::to_string(i) + "]")));
  }
  if (Has(j, "otp_location")) m.otp_location = GetEnum<ElementLocation>(j, path, "otp_location");
  if (Has(j, "otp_masked")) m.otp_masked = GetBool(j, path, "otp_masked");
  if (Has(j, "delivery_platform")) {
    m.delivery_platform = GetEnum<PlatformKind>(j, path, "delivery_platform");
  } else if (m.supported_platforms.size() == 1) {
    m.delivery_platform = *m.supported_platforms.begin();
  }
  if (Has(j, "shows_requester_details")) {
    m.shows_requester_details = GetBool(j, path, "shows_requester_details");
  }
  if (Has(j, "admin_lockout")) m.admin_lockout = GetBool(j, path, "admin_lockout");
  if (Has(j, "call_conflicts_with_reader")) {
    m.call_conflicts_with_reader = GetBool(j, path, "call_conflicts_with_reader");
  }
  return m;
}

PlatformSetting SettingFromJson(const Json& j, const std::string& path) {
  PlatformSetting s;
  s.kind = GetEnum<SettingKind>(j, path, "kind");
  s.terminal_reader = OptString(j, path, "terminal_reader");
  s.smartphone_reader = OptString(j, path, "smartphone_reader");
  return s;
}

ScreenReaderProfile ProfileFromJson(const Json& j, const std::string& path) {
  ScreenReaderProfile p;
  p.id = GetString(j, path, "id");
  p.platform = GetEnum<PlatformKind>(j, path, "platform");
  p.reads_outside_browser = GetBool(j, path, "reads_outside_browser");
  p.reads_security_prompts = GetEnum<PromptReading>(j, path, "reads_security_prompts");
  p.reads_service_name_in_prompt = GetBool(j, path, "reads_service_name_in_prompt");
  p.overlay_handling = GetEnum<OverlayHandling>(j, path, "overlay_handling");
  p.notification_ordering = GetEnum<NotificationOrdering>(j, path, "notification_ordering");
  p.otp_pronunciation = GetEnum<OtpStyle>(j, path, "otp_pronunciation");
  if (Has(j, "default_speech_rate_pct")) {
    p.default_speech_rate_pct = GetInt(j, path, "default_speech_rate_pct");
  }
  if (Has(j, "method_overrides")) {
    const Json& ov = j.at("method_overrides");
    const std::string ov_path = Join(path, "method_overrides");
    if (!ov.is_object()) throw SchemaError(ov_path, "expected an object");
    for (auto it = ov.begin(); it != ov.end(); ++it) {
      const std::string entry_path = ov_path + "." + it.key();
      MethodOverride o;
      if (Has(it.value(), "otp_pronunciation")) {
        o.otp_pronunciation = GetEnum<OtpStyle>(it.value(), entry_path, "otp_pronunciation");
      }
      if (Has(it.value(), "otp_entry_hindered")) {
        o.otp_entry_hindered = GetBool(it.value(), entry_path, "otp_entry_hindered");
      }
      p.method_overrides.emplace(it.key(), o);
    }
  }
  return p;
}

WorkflowSpec WorkflowFromJson(const Json& j) {
  WorkflowSpec w;
  w.id = GetString(j, "", "id");
  w.method = GetString(j, "", "method");
  w.setting = SettingFromJson(Require(j, "", "setting"), "setting");
  w.full_text = GetString(j, "", "full_text");
  const Json& els = RequireArray(j, "", "elements");
  for (std::size_t i = 0; i < els.size(); ++i) {
    const std::string p = "elements[" + std::to_string(i) + "]";
    CriticalElement e;
    e.kind = GetEnum<ElementKind>(els[i], p, "kind");
    e.text = GetString(els[i], p, "text");
    e.location = GetEnum<ElementLocation>(els[i], p, "location");
    e.required = Has(els[i], "required") ? GetBool(els[i], p, "required") : true;
    w.elements.push_back(std::move(e));
  }
  if (Has(j, "verification_timeout_s")) {
    w.verification_timeout_s = GetNumber(j, "", "verification_timeout_s");
  }
  return w;
}

SessionRecord SessionFromJson(const Json& j) {
  SessionRecord s;
  s.id = GetString(j, "", "id");
  s.workflow = GetString(j, "", "workflow");
  s.setting = SettingFromJson(Require(j, "", "setting"), "setting");
  if (Has(j, "speech_rate_pct")) s.speech_rate_pct = GetInt(j, "", "speech_rate_pct");
  const Json& evs = RequireArray(j, "", "events");
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const std::string p = "events[" + std::to_string(i) + "]";
    TranscriptEvent e;
    e.t_start_s = RoundToMillis(GetNumber(evs[i], p, "t_start_s"));
    e.t_end_s = RoundToMillis(GetNumber(evs[i], p, "t_end_s"));
    e.channel = GetEnum<Channel>(evs[i], p, "channel");
    e.text = GetString(evs[i], p, "text");
    s.events.push_back(std::move(e));
  }
  s.headphones_on_terminal =
      Has(j, "headphones_on_terminal") ? GetBool(j, "", "headphones_on_terminal") : false;
  s.headphones_on_smartphone =
      Has(j, "headphones_on_smartphone") ? GetBool(j, "", "headphones_on_smartphone") : false;
  return s;
}

std::vector<AuthMethod> CatalogFromJson(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) arr = &RequireArray(j, "", "methods");
  if (!arr->is_array()) throw SchemaError("<root>", "expected an array of methods");
  std::vector<AuthMethod> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(AuthMethodFromJson((*arr)[i], "methods[" + std::to_string(i) + "]"));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  return text;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<root>", "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace srauth
