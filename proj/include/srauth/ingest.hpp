#pragma once

// File loaders for workflows, sessions, profiles and the method catalog, plus
// the speech-to-text gateway that turns channel recordings into a session.

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srauth/json_io.hpp"
#include "srauth/model.hpp"

namespace srauth::ingest {

namespace fs = std::filesystem;

template <typename T>
struct Loaded {
  T value;
  std::vector<std::string> warnings;
};

// All loaders throw IoError, SchemaError (naming the field) or
// ValidationError (listing every violation).
//
// With a non-empty catalog the workflow is also checked against its method
// (OTP presence, supported setting).
WorkflowSpec LoadWorkflow(const fs::path& path, std::span<const AuthMethod> catalog = {});
// Unsorted events are re-sorted (stable, by t_start_s) with a warning.
Loaded<SessionRecord> LoadSession(const fs::path& path);
ScreenReaderProfile LoadProfile(const fs::path& path);
std::vector<AuthMethod> LoadCatalog(const fs::path& path);

// Regular *.json files directly under `dir`, sorted by file name. A missing
// directory is an IoError.
std::vector<fs::path> ListJsonFiles(const fs::path& dir);
std::vector<ScreenReaderProfile> LoadProfileDir(const fs::path& dir);
// A bare array of settings or {"settings": [...]}; each is shape-checked.
std::vector<PlatformSetting> LoadSettings(const fs::path& path);

// ---------------------------------------------------------------------------
// Speech-to-text gateway.

struct SttSegment {
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::string text;
  double confidence = 1.0;

  bool operator==(const SttSegment&) const = default;
};

// Sidecar / HTTP response format: a JSON array of segment objects.
std::vector<SttSegment> SegmentsFromJson(const Json& j);
Json ToJson(std::span<const SttSegment> segments);

// The toolkit never decodes audio; bytes go to the backend untouched.
struct AudioClip {
  std::string bytes;
  std::string media_type;  // "audio/wav" or "audio/mpeg"
  fs::path source;         // where the bytes came from; replay uses it
};

// "audio/wav" for .wav, "audio/mpeg" for .mp3; UsageError otherwise.
std::string MediaTypeFor(const fs::path& audio);
AudioClip ReadAudio(const fs::path& audio);

class SttBackend {
 public:
  virtual ~SttBackend() = default;
  // Time-ordered segments, or TransportError.
  virtual std::vector<SttSegment> Transcribe(const AudioClip& clip) = 0;
};

// Replays recorded segments from `<audio>.segments.json` next to the clip.
class ReplayBackend : public SttBackend {
 public:
  std::vector<SttSegment> Transcribe(const AudioClip& clip) override;
  static fs::path SidecarFor(const fs::path& audio);
};

struct HttpBackendOptions {
  std::string endpoint;      // http://host[:port]/path
  std::string bearer_token;  // sent as Authorization when non-empty
  double timeout_s = 60.0;
};

// One POST per clip: body is the raw audio, Content-Type its media type, and
// the response body the segment array. Network failures and 5xx responses
// are retryable TransportErrors; other non-2xx statuses are not. Each call
// opens its own connection, so one instance may serve several workers.
class HttpBackend : public SttBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  std::vector<SttSegment> Transcribe(const AudioClip& clip) override;

 private:
  HttpBackendOptions options_;
  std::string base_;  // scheme://host:port
  std::string path_;
};

struct ChannelInput {
  fs::path audio;
  Channel channel = Channel::kScreenReader;
};

struct TranscribeOptions {
  std::string session_id;
  std::string workflow_id;
  PlatformSetting setting;
  int speech_rate_pct = 50;
  bool headphones_on_terminal = false;
  bool headphones_on_smartphone = false;
  // Segments below the floor are kept and reported in warnings.
  double confidence_floor = 0.0;
};

// Stable merge of per-channel segment lists by t_start_s; ties keep input
// order (channel order first, then segment order).
std::vector<TranscriptEvent> MergeChannels(
    std::span<const std::vector<SttSegment>> per_channel, std::span<const Channel> channels);

// One recording per channel, merged on the common clock the evaluator
// supplies. Throws TransportError from the backend and EmptyTranscriptError
// when no segment comes back. Nothing is written.
Loaded<SessionRecord> TranscribeSession(std::span<const ChannelInput> inputs, SttBackend& backend,
                                        const TranscribeOptions& options);

// A transcribe manifest names the session and its recordings; relative audio
// paths resolve against the manifest's directory.
struct TranscribeManifest {
  std::vector<ChannelInput> inputs;
  TranscribeOptions options;
};
TranscribeManifest LoadManifest(const fs::path& path);

}  // namespace srauth::ingest
