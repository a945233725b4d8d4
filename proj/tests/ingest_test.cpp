#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "httplib.h"
#include "srauth/error.hpp"
#include "srauth/ingest.hpp"
#include "test_util.hpp"

namespace srauth::ingest {
namespace {

using srauth::testing::kDataDir;
using srauth::testing::TempDir;

const fs::path kWorkflows = kDataDir / "fixtures" / "workflows";
const fs::path kSessions = kDataDir / "fixtures" / "sessions";

TEST(LoadWorkflowTest, ValidFixture) {
  const auto w = LoadWorkflow(kWorkflows / "winauth-term.json");
  EXPECT_EQ(w.id, "winauth-term");
  ASSERT_NE(w.OtpElement(), nullptr);
  EXPECT_EQ(w.OtpElement()->text, "739201");
}

TEST(LoadWorkflowTest, MissingFullTextNamesField) {
  TempDir dir;
  Json j = ReadJsonFile(kWorkflows / "winauth-term.json");
  j.erase("full_text");
  WriteTextFile(dir / "w.json", j.dump());
  try {
    LoadWorkflow(dir / "w.json");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "full_text");
  }
}

TEST(LoadWorkflowTest, OtpNotInFullTextIsValidationError) {
  TempDir dir;
  Json j = ReadJsonFile(kWorkflows / "winauth-term.json");
  j["elements"][1]["text"] = "111111";
  WriteTextFile(dir / "w.json", j.dump());
  try {
    LoadWorkflow(dir / "w.json");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_NE(e.violations()[0].find("111111"), std::string::npos);
  }
}

TEST(LoadWorkflowTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadWorkflow(kWorkflows / "absent.json"), IoError);
}

TEST(LoadSessionTest, ValidFixture) {
  const auto s = LoadSession(kSessions / "winauth-jaws.json");
  EXPECT_EQ(s.value.id, "winauth-jaws");
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_EQ(s.value.events.size(), 3u);
}

TEST(LoadSessionTest, OutOfOrderEventsAreSortedWithWarning) {
  TempDir dir;
  Json j = ReadJsonFile(kSessions / "winauth-jaws.json");
  std::swap(j["events"][0], j["events"][2]);
  WriteTextFile(dir / "s.json", j.dump());
  const auto s = LoadSession(dir / "s.json");
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_EQ(s.value, LoadSession(kSessions / "winauth-jaws.json").value);
}

TEST(LoadSessionTest, NonPositiveDurationIsValidationError) {
  TempDir dir;
  Json j = ReadJsonFile(kSessions / "winauth-jaws.json");
  j["events"][1]["t_end_s"] = j["events"][1]["t_start_s"];
  WriteTextFile(dir / "s.json", j.dump());
  EXPECT_THROW(LoadSession(dir / "s.json"), ValidationError);
}

TEST(LoadDirTest, ListsJsonSorted) {
  const auto files = ListJsonFiles(kDataDir / "profiles");
  ASSERT_EQ(files.size(), 6u);
  EXPECT_TRUE(std::is_sorted(files.begin(), files.end()));
  EXPECT_THROW(ListJsonFiles(kDataDir / "nope"), IoError);
}

TEST(MediaTypeTest, WavAndMp3Only) {
  EXPECT_EQ(MediaTypeFor("a.wav"), "audio/wav");
  EXPECT_EQ(MediaTypeFor("a.MP3"), "audio/mpeg");
  EXPECT_THROW(MediaTypeFor("a.flac"), UsageError);
}

TEST(SegmentsTest, SchemaChecks) {
  EXPECT_THROW(SegmentsFromJson(Json::object()), SchemaError);
  Json bad = Json::parse(R"([{"t_start_s":1,"t_end_s":1,"text":"x","confidence":0.5}])");
  EXPECT_THROW(SegmentsFromJson(bad), SchemaError);
  bad = Json::parse(R"([{"t_start_s":0,"t_end_s":1,"text":"x","confidence":1.5}])");
  EXPECT_THROW(SegmentsFromJson(bad), SchemaError);
  std::vector<SttSegment> segs = {{0, 1, "a", 0.5}, {1, 2.5, "b", 1.0}};
  EXPECT_EQ(SegmentsFromJson(ToJson(segs)), segs);
}

// Backend returning canned segments per audio file name.
class MockBackend : public SttBackend {
 public:
  std::map<std::string, std::vector<SttSegment>> by_file;
  bool fail = false;
  int calls = 0;

  std::vector<SttSegment> Transcribe(const AudioClip& clip) override {
    ++calls;
    if (fail) throw TransportError("connection refused", true);
    return by_file.at(clip.source.filename().string());
  }
};

TranscribeOptions Options() {
  TranscribeOptions o;
  o.session_id = "rec";
  o.workflow_id = "wf";
  o.setting = srauth::testing::Smartphone("talkback");
  return o;
}

TEST(TranscribeTest, TwoSegmentsBecomeScreenReaderEvents) {
  TempDir dir;
  WriteTextFile(dir / "sr.wav", "RIFF");
  MockBackend backend;
  backend.by_file["sr.wav"] = {{0, 1, "hello", 0.9}, {1.5, 2, "world", 0.8}};
  const std::vector<ChannelInput> in = {{dir / "sr.wav", Channel::kScreenReader}};
  const auto r = TranscribeSession(in, backend, Options());
  ASSERT_EQ(r.value.events.size(), 2u);
  for (const auto& e : r.value.events) EXPECT_EQ(e.channel, Channel::kScreenReader);
  EXPECT_EQ(r.value.events[0].text, "hello");
  EXPECT_EQ(r.value.id, "rec");
}

TEST(TranscribeTest, TransportFailureSurfacesRetryable) {
  TempDir dir;
  WriteTextFile(dir / "sr.wav", "RIFF");
  MockBackend backend;
  backend.fail = true;
  const std::vector<ChannelInput> in = {{dir / "sr.wav", Channel::kScreenReader}};
  try {
    TranscribeSession(in, backend, Options());
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
}

TEST(TranscribeTest, NoSegmentsIsEmptyTranscript) {
  TempDir dir;
  WriteTextFile(dir / "sr.wav", "RIFF");
  MockBackend backend;
  backend.by_file["sr.wav"] = {};
  const std::vector<ChannelInput> in = {{dir / "sr.wav", Channel::kScreenReader}};
  EXPECT_THROW(TranscribeSession(in, backend, Options()), EmptyTranscriptError);
}

TEST(TranscribeTest, LowConfidenceKeptAndFlagged) {
  TempDir dir;
  WriteTextFile(dir / "sr.wav", "RIFF");
  MockBackend backend;
  backend.by_file["sr.wav"] = {{0, 1, "hello", 0.2}, {1.5, 2, "world", 0.8}};
  auto o = Options();
  o.confidence_floor = 0.5;
  const std::vector<ChannelInput> in = {{dir / "sr.wav", Channel::kScreenReader}};
  const auto r = TranscribeSession(in, backend, o);
  EXPECT_EQ(r.value.events.size(), 2u);
  EXPECT_EQ(r.warnings.size(), 1u);
}

// Oracle for the merge: concatenate (channel order, then segment order),
// then repeatedly pick the earliest start, lowest concatenation index first.
std::vector<TranscriptEvent> MergeOracle(const std::vector<std::vector<SttSegment>>& lists,
                                         const std::vector<Channel>& channels) {
  std::vector<TranscriptEvent> pool;
  for (std::size_t c = 0; c < lists.size(); ++c) {
    for (const auto& s : lists[c]) pool.push_back({s.t_start_s, s.t_end_s, channels[c], s.text});
  }
  std::vector<bool> used(pool.size(), false);
  std::vector<TranscriptEvent> out;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    std::size_t best = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      if (best == pool.size() || pool[i].t_start_s < pool[best].t_start_s) best = i;
    }
    used[best] = true;
    out.push_back(pool[best]);
  }
  return out;
}

TEST(MergeTest, HandBuiltTwoChannelInterleave) {
  const std::vector<std::vector<SttSegment>> lists = {
      {{0, 2, "sr one", 1}, {3, 4, "sr two", 1}, {6, 7, "sr three", 1}},
      {{1, 5, "call one", 1}, {3, 3.5, "call two", 1}}};
  const std::vector<Channel> ch = {Channel::kScreenReader, Channel::kPhoneCall};
  const auto merged = MergeChannels(lists, ch);
  std::vector<std::string> texts;
  for (const auto& e : merged) texts.push_back(e.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"sr one", "call one", "sr two", "call two",
                                             "sr three"}));
  EXPECT_EQ(merged, MergeOracle(lists, ch));
}

TEST(MergeTest, MatchesOracleOnRandomLists) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<std::vector<SttSegment>> lists(k);
    std::vector<Channel> ch;
    for (int c = 0; c < k; ++c) {
      ch.push_back(static_cast<Channel>(rng() % 3));
      double t = 0;
      const int n = static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) {
        t += static_cast<double>(rng() % 3);  // repeats create ties
        lists[c].push_back({t, t + 1, "c" + std::to_string(c) + "s" + std::to_string(i), 1});
      }
    }
    const auto merged = MergeChannels(lists, ch);
    ASSERT_EQ(merged, MergeOracle(lists, ch)) << "trial " << trial;
    // Every event text is some segment text, verbatim.
    for (const auto& e : merged) {
      bool found = false;
      for (const auto& l : lists) {
        for (const auto& s : l) found = found || s.text == e.text;
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(ReplayBackendTest, ManifestWithTwoChannels) {
  const auto m = LoadManifest(kDataDir / "examples" / "transcribe-google-call.json");
  ASSERT_EQ(m.inputs.size(), 2u);
  ReplayBackend backend;
  const auto r = TranscribeSession(m.inputs, backend, m.options);
  ASSERT_EQ(r.value.events.size(), 4u);
  EXPECT_EQ(r.value.events[2].channel, Channel::kPhoneCall);
  EXPECT_TRUE(ValidateSession(r.value).empty());
}

TEST(ReplayBackendTest, MissingSidecarIsTransportError) {
  TempDir dir;
  WriteTextFile(dir / "x.wav", "RIFF");
  ReplayBackend backend;
  EXPECT_THROW(backend.Transcribe(ReadAudio(dir / "x.wav")), TransportError);
}

// Local HTTP server standing in for a speech-to-text service.
class HttpBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/stt", [this](const httplib::Request& req, httplib::Response& res) {
      last_content_type_ = req.get_header_value("Content-Type");
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      res.set_content(R"([{"t_start_s":0,"t_end_s":1.5,"text":"hi there","confidence":0.9}])",
                      "application/json");
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 503;
    });
    server_.Post("/denied", [](const httplib::Request&, httplib::Response& res) {
      res.status = 401;
    });
    server_.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      res.set_content("[]", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string Url(const std::string& path) {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::string last_content_type_, last_auth_, last_body_;
};

TEST_F(HttpBackendTest, PostsRawAudioWithMediaType) {
  HttpBackend backend({Url("/stt"), "secret", 5.0});
  AudioClip clip{"RIFFDATA", "audio/wav", "a.wav"};
  const auto segs = backend.Transcribe(clip);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].text, "hi there");
  EXPECT_EQ(last_content_type_, "audio/wav");
  EXPECT_EQ(last_auth_, "Bearer secret");
  EXPECT_EQ(last_body_, "RIFFDATA");
}

TEST_F(HttpBackendTest, ServerErrorIsRetryable) {
  HttpBackend backend({Url("/broken"), "", 5.0});
  try {
    backend.Transcribe({"x", "audio/wav", "a.wav"});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
}

TEST_F(HttpBackendTest, ClientErrorIsNotRetryable) {
  HttpBackend backend({Url("/denied"), "", 5.0});
  try {
    backend.Transcribe({"x", "audio/wav", "a.wav"});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_FALSE(e.retryable());
  }
}

TEST_F(HttpBackendTest, TimeoutIsRetryable) {
  HttpBackend backend({Url("/slow"), "", 0.3});
  try {
    backend.Transcribe({"x", "audio/wav", "a.wav"});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
}

TEST(HttpBackendConfigTest, RejectsNonHttpEndpoint) {
  EXPECT_THROW(HttpBackend({"ftp://x/y", "", 1.0}), UsageError);
  EXPECT_THROW(HttpBackend({"http://x/y", "", 0.0}), UsageError);
}

TEST(HttpBackendConfigTest, UnreachableHostIsRetryable) {
  // Nothing listens on the discard port on loopback.
  HttpBackend backend({"http://127.0.0.1:9/stt", "", 1.0});
  try {
    backend.Transcribe({"x", "audio/wav", "a.wav"});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
}

}  // namespace
}  // namespace srauth::ingest
