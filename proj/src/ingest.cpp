#include "srauth/ingest.hpp"

#include <algorithm>
#include <cstdio>

#include "httplib.h"
#include "srauth/error.hpp"

namespace srauth::ingest {
namespace {

[[noreturn]] void Invalid(const fs::path& path, std::vector<std::string> violations) {
  for (auto& v : violations) v = path.string() + ": " + v;
  throw ValidationError(std::move(violations));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool SortedByStart(const std::vector<TranscriptEvent>& ev) {
  return std::is_sorted(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.t_start_s < b.t_start_s;
  });
}

}  // namespace

WorkflowSpec LoadWorkflow(const fs::path& path, std::span<const AuthMethod> catalog) {
  WorkflowSpec spec = WorkflowFromJson(ReadJsonFile(path));
  auto violations = catalog.empty() ? ValidateWorkflowShape(spec) : ValidateWorkflow(spec, catalog);
  if (!violations.empty()) Invalid(path, std::move(violations));
  return spec;
}

Loaded<SessionRecord> LoadSession(const fs::path& path) {
  Loaded<SessionRecord> out{SessionFromJson(ReadJsonFile(path)), {}};
  auto& events = out.value.events;
  if (!SortedByStart(events)) {
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return a.t_start_s < b.t_start_s;
    });
    out.warnings.push_back(path.string() + ": events were not ordered by t_start_s; re-sorted");
  }
  if (auto v = ValidateSession(out.value); !v.empty()) Invalid(path, std::move(v));
  return out;
}

ScreenReaderProfile LoadProfile(const fs::path& path) {
  ScreenReaderProfile p = ProfileFromJson(ReadJsonFile(path));
  if (auto v = ValidateProfile(p); !v.empty()) Invalid(path, std::move(v));
  return p;
}

std::vector<AuthMethod> LoadCatalog(const fs::path& path) {
  auto catalog = CatalogFromJson(ReadJsonFile(path));
  if (auto v = ValidateCatalog(catalog); !v.empty()) Invalid(path, std::move(v));
  return catalog;
}

std::vector<fs::path> ListJsonFiles(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: '" + dir.string() + "'");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PlatformSetting> LoadSettings(const fs::path& path) {
  const Json j = ReadJsonFile(path);
  const Json* arr = &j;
  if (j.is_object() && j.contains("settings")) arr = &j["settings"];
  if (!arr->is_array()) throw SchemaError("settings", "expected an array of settings");
  std::vector<PlatformSetting> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(SettingFromJson((*arr)[i], "settings[" + std::to_string(i) + "]"));
    if (auto v = ValidateSetting(out.back()); !v.empty()) {
      throw ValidationError({path.string() + ": settings[" + std::to_string(i) + "]: " + v.front()});
    }
  }
  return out;
}

std::vector<ScreenReaderProfile> LoadProfileDir(const fs::path& dir) {
  std::vector<ScreenReaderProfile> out;
  for (const auto& p : ListJsonFiles(dir)) out.push_back(LoadProfile(p));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SttSegment> SegmentsFromJson(const Json& j) {
  if (!j.is_array()) throw SchemaError("<root>", "expected an array of segments");
  std::vector<SttSegment> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& s = j[i];
    const std::string at = "[" + std::to_string(i) + "]";
    if (!s.is_object()) throw SchemaError(at, "expected an object");
    auto number = [&](const char* field) {
      auto it = s.find(field);
      if (it == s.end()) throw SchemaError(at + "." + field, "missing required field");
      if (!it->is_number()) throw SchemaError(at + "." + field, "expected a number");
      return it->get<double>();
    };
    SttSegment seg;
    seg.t_start_s = RoundToMillis(number("t_start_s"));
    seg.t_end_s = RoundToMillis(number("t_end_s"));
    auto text = s.find("text");
    if (text == s.end()) throw SchemaError(at + ".text", "missing required field");
    if (!text->is_string()) throw SchemaError(at + ".text", "expected a string");
    seg.text = text->get<std::string>();
    seg.confidence = number("confidence");
    if (!(seg.t_end_s > seg.t_start_s)) {
      throw SchemaError(at + ".t_end_s", "must be greater than t_start_s");
    }
    if (!(seg.confidence >= 0.0 && seg.confidence <= 1.0)) {
      throw SchemaError(at + ".confidence", "must be within [0, 1]");
    }
    out.push_back(std::move(seg));
  }
  return out;
}

Json ToJson(std::span<const SttSegment> segments) {
  Json arr = Json::array();
  for (const auto& s : segments) {
    arr.push_back({{"t_start_s", s.t_start_s},
                   {"t_end_s", s.t_end_s},
                   {"text", s.text},
                   {"confidence", s.confidence}});
  }
  return arr;
}

std::string MediaTypeFor(const fs::path& audio) {
  const std::string ext = Lower(audio.extension().string());
  if (ext == ".wav") return "audio/wav";
  if (ext == ".mp3") return "audio/mpeg";
  throw UsageError("unsupported audio type '" + audio.string() + "' (expected .wav or .mp3)");
}

AudioClip ReadAudio(const fs::path& audio) {
  AudioClip clip;
  clip.media_type = MediaTypeFor(audio);
  clip.bytes = ReadTextFile(audio);
  clip.source = audio;
  return clip;
}

fs::path ReplayBackend::SidecarFor(const fs::path& audio) {
  fs::path p = audio;
  p += ".segments.json";
  return p;
}

std::vector<SttSegment> ReplayBackend::Transcribe(const AudioClip& clip) {
  const fs::path sidecar = SidecarFor(clip.source);
  std::error_code ec;
  if (!fs::exists(sidecar, ec)) {
    throw TransportError("replay: no sidecar '" + sidecar.string() + "'", false);
  }
  return SegmentsFromJson(ReadJsonFile(sidecar));
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  const std::string& url = options_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw UsageError("stt endpoint must be an http:// URL, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (!(options_.timeout_s > 0.0)) throw UsageError("stt timeout must be positive");
}

std::vector<SttSegment> HttpBackend::Transcribe(const AudioClip& clip) {
  httplib::Client client(base_);
  const auto secs = static_cast<time_t>(options_.timeout_s);
  const auto usecs = static_cast<time_t>((options_.timeout_s - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!options_.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.bearer_token);
  }

  auto res = client.Post(path_, headers, clip.bytes, clip.media_type);
  if (!res) {
    throw TransportError("stt request to " + options_.endpoint + " failed: " +
                             httplib::to_string(res.error()),
                         true);
  }
  if (res->status >= 500) {
    throw TransportError("stt server returned HTTP " + std::to_string(res->status), true);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("stt server rejected the request with HTTP " +
                             std::to_string(res->status),
                         false);
  }
  Json body;
  try {
    body = Json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<response>", std::string("stt response is not valid JSON: ") + e.what());
  }
  return SegmentsFromJson(body);
}

std::vector<TranscriptEvent> MergeChannels(std::span<const std::vector<SttSegment>> per_channel,
                                           std::span<const Channel> channels) {
  if (per_channel.size() != channels.size()) throw Error("merge: one channel per segment list");
  std::vector<TranscriptEvent> out;
  for (std::size_t c = 0; c < per_channel.size(); ++c) {
    for (const auto& s : per_channel[c]) {
      out.push_back({s.t_start_s, s.t_end_s, channels[c], s.text});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.t_start_s < b.t_start_s;
  });
  return out;
}

Loaded<SessionRecord> TranscribeSession(std::span<const ChannelInput> inputs, SttBackend& backend,
                                        const TranscribeOptions& options) {
  if (inputs.empty()) throw UsageError("transcribe: no audio inputs");
  Loaded<SessionRecord> out;
  std::vector<std::vector<SttSegment>> lists;
  std::vector<Channel> channels;
  for (const auto& in : inputs) {
    auto segments = backend.Transcribe(ReadAudio(in.audio));
    std::vector<SttSegment> kept;
    for (auto& s : segments) {
      if (s.text.find_first_not_of(" \t\r\n") == std::string::npos) {
        out.warnings.push_back(in.audio.string() + ": dropped blank segment at " +
                               std::to_string(s.t_start_s) + " s");
        continue;
      }
      if (s.confidence < options.confidence_floor) {
        char buf[128];
        std::snprintf(buf, sizeof buf, ": low-confidence segment at %.3f s (%.2f < %.2f)",
                      s.t_start_s, s.confidence, options.confidence_floor);
        out.warnings.push_back(in.audio.string() + buf);
      }
      kept.push_back(std::move(s));
    }
    lists.push_back(std::move(kept));
    channels.push_back(in.channel);
  }

  SessionRecord& rec = out.value;
  rec.id = options.session_id;
  rec.workflow = options.workflow_id;
  rec.setting = options.setting;
  rec.speech_rate_pct = options.speech_rate_pct;
  rec.headphones_on_terminal = options.headphones_on_terminal;
  rec.headphones_on_smartphone = options.headphones_on_smartphone;
  rec.events = MergeChannels(lists, channels);
  if (rec.events.empty()) {
    throw EmptyTranscriptError("transcribe: backend returned no segments for session '" +
                               rec.id + "'");
  }
  if (auto v = ValidateSession(rec); !v.empty()) throw ValidationError(std::move(v));
  return out;
}

TranscribeManifest LoadManifest(const fs::path& path) {
  const Json j = ReadJsonFile(path);
  if (!j.is_object()) throw SchemaError("<root>", "expected an object");
  auto str = [&](const char* field) {
    auto it = j.find(field);
    if (it == j.end()) throw SchemaError(field, "missing required field");
    if (!it->is_string()) throw SchemaError(field, "expected a string");
    return it->get<std::string>();
  };
  TranscribeManifest m;
  m.options.session_id = str("session_id");
  m.options.workflow_id = str("workflow");
  if (!j.contains("setting")) throw SchemaError("setting", "missing required field");
  m.options.setting = SettingFromJson(j["setting"]);
  m.options.speech_rate_pct = j.value("speech_rate_pct", 50);
  m.options.headphones_on_terminal = j.value("headphones_on_terminal", false);
  m.options.headphones_on_smartphone = j.value("headphones_on_smartphone", false);
  m.options.confidence_floor = j.value("confidence_floor", 0.0);

  auto inputs = j.find("inputs");
  if (inputs == j.end() || !inputs->is_array() || inputs->empty()) {
    throw SchemaError("inputs", "expected a non-empty array");
  }
  const fs::path base = path.parent_path();
  for (std::size_t i = 0; i < inputs->size(); ++i) {
    const Json& in = (*inputs)[i];
    const std::string at = "inputs[" + std::to_string(i) + "]";
    if (!in.is_object() || !in.contains("audio") || !in["audio"].is_string()) {
      throw SchemaError(at + ".audio", "expected a string");
    }
    ChannelInput ci;
    fs::path audio = in["audio"].get<std::string>();
    ci.audio = audio.is_absolute() ? audio : base / audio;
    const std::string ch = in.value("channel", std::string("SCREEN_READER"));
    auto channel = EnumFromString<Channel>(ch);
    if (!channel) throw SchemaError(at + ".channel", "unknown channel '" + ch + "'");
    ci.channel = *channel;
    m.inputs.push_back(std::move(ci));
  }
  if (auto v = ValidateSetting(m.options.setting); !v.empty()) Invalid(path, std::move(v));
  return m;
}

}  // namespace srauth::ingest
