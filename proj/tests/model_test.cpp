#include <gtest/gtest.h>

#include "srauth/error.hpp"
#include "srauth/ingest.hpp"
#include "srauth/json_io.hpp"
#include "srauth/model.hpp"
#include "test_util.hpp"

namespace srauth {
namespace {

using testing::Concurrent;
using testing::kDataDir;
using testing::Smartphone;
using testing::Terminal;

template <typename E>
void ExpectEnumRoundTrip() {
  for (auto v : AllValues<E>()) {
    auto back = EnumFromString<E>(ToString(v));
    ASSERT_TRUE(back.has_value()) << ToString(v);
    EXPECT_EQ(*back, v);
  }
}

TEST(EnumTest, WireNamesRoundTrip) {
  ExpectEnumRoundTrip<PlatformKind>();
  ExpectEnumRoundTrip<SettingKind>();
  ExpectEnumRoundTrip<AuthCategory>();
  ExpectEnumRoundTrip<PromptReading>();
  ExpectEnumRoundTrip<OverlayHandling>();
  ExpectEnumRoundTrip<NotificationOrdering>();
  ExpectEnumRoundTrip<OtpStyle>();
  ExpectEnumRoundTrip<ElementKind>();
  ExpectEnumRoundTrip<ElementLocation>();
  ExpectEnumRoundTrip<Channel>();
  ExpectEnumRoundTrip<Verdict>();
  EXPECT_FALSE(EnumFromString<Verdict>("vulnerable").has_value());
}

TEST(OtpTest, Shape) {
  EXPECT_TRUE(IsValidOtp("123456"));
  EXPECT_TRUE(IsValidOtp("123 456"));
  EXPECT_TRUE(IsValidOtp("0"));
  EXPECT_FALSE(IsValidOtp(""));
  EXPECT_FALSE(IsValidOtp(" 123"));
  EXPECT_FALSE(IsValidOtp("123 "));
  EXPECT_FALSE(IsValidOtp("123  456"));
  EXPECT_FALSE(IsValidOtp("12a456"));
  EXPECT_EQ(OtpGroups("123 456"), (std::vector<std::string>{"123", "456"}));
  EXPECT_EQ(OtpDigits("123 456"), "123456");
}

TEST(SettingTest, ReaderSlotsMustMatchKind) {
  EXPECT_TRUE(ValidateSetting(Terminal("jaws")).empty());
  EXPECT_TRUE(ValidateSetting(Smartphone("voiceover")).empty());
  EXPECT_TRUE(ValidateSetting(Concurrent("jaws", "voiceover")).empty());
  EXPECT_FALSE(ValidateSetting({SettingKind::kTerminal, std::nullopt, "voiceover"}).empty());
  EXPECT_FALSE(ValidateSetting({SettingKind::kConcurrent, "jaws", std::nullopt}).empty());
  EXPECT_FALSE(ValidateSetting({SettingKind::kTerminal, "", std::nullopt}).empty());
}

TEST(SettingTest, ReadersMustExistOnTheRightPlatform) {
  const auto profiles = ingest::LoadProfileDir(kDataDir / "profiles");
  EXPECT_TRUE(ValidateSettingReaders(Concurrent("nvda", "talkback"), profiles).empty());
  auto v = ValidateSettingReaders(Terminal("orca"), profiles);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("orca"), std::string::npos);
  EXPECT_FALSE(ValidateSettingReaders(Terminal("voiceover"), profiles).empty());
}

TEST(SupportsSettingTest, ConcurrentAcceptsEitherDevice) {
  AuthMethod pc_only;
  pc_only.id = "gauth";
  pc_only.supported_platforms = {PlatformKind::kTerminal};
  EXPECT_TRUE(SupportsSetting(pc_only, SettingKind::kTerminal));
  EXPECT_FALSE(SupportsSetting(pc_only, SettingKind::kSmartphone));
  EXPECT_TRUE(SupportsSetting(pc_only, SettingKind::kConcurrent));
}

WorkflowSpec SampleWorkflow() {
  WorkflowSpec w;
  w.id = "wf";
  w.method = "gauth";
  w.setting = Terminal("jaws");
  w.full_text = "Enter the code 123 456 then press Verify";
  w.elements = {{ElementKind::kOtp, "123 456", ElementLocation::kInBrowser, true},
                {ElementKind::kButton, "Verify", ElementLocation::kInBrowser, true}};
  w.verification_timeout_s = 30.0;
  return w;
}

TEST(WorkflowTest, ElementsMustOccurInFullText) {
  auto w = SampleWorkflow();
  EXPECT_TRUE(ValidateWorkflowShape(w).empty());
  w.elements[1].text = "Submit";
  EXPECT_EQ(ValidateWorkflowShape(w).size(), 1u);
  // Codes conveyed by a call never appear on screen.
  w.elements[1].text = "Verify";
  w.elements[0].text = "999999";
  EXPECT_FALSE(ValidateWorkflowShape(w).empty());
  w.elements[0].location = ElementLocation::kPhoneCallAudio;
  EXPECT_TRUE(ValidateWorkflowShape(w).empty());
}

TEST(WorkflowTest, AtMostOneOtp) {
  auto w = SampleWorkflow();
  w.elements.push_back(w.elements[0]);
  EXPECT_FALSE(ValidateWorkflowShape(w).empty());
}

TEST(WorkflowTest, CatalogChecksMethodAndSetting) {
  const auto catalog = ingest::LoadCatalog(kDataDir / "catalog.json");
  auto w = SampleWorkflow();
  EXPECT_TRUE(ValidateWorkflow(w, catalog).empty());
  w.setting = Smartphone("voiceover");
  EXPECT_FALSE(ValidateWorkflow(w, catalog).empty());
  w.method = "nope";
  EXPECT_FALSE(ValidateWorkflow(w, catalog).empty());
}

TEST(SessionTest, EventInvariants) {
  auto s = testing::MakeSession("s", "wf", Terminal("jaws"),
                                {testing::Sr(0, 1, "a"), testing::Sr(1, 2, "b")});
  EXPECT_TRUE(ValidateSession(s).empty());
  s.events[1].t_end_s = 1.0;
  EXPECT_FALSE(ValidateSession(s).empty());
  s.events[1].t_end_s = 2.0;
  s.events[0].t_start_s = -0.5;
  EXPECT_FALSE(ValidateSession(s).empty());
  s.events[0].t_start_s = 0.0;
  s.events[1].text.clear();
  EXPECT_FALSE(ValidateSession(s).empty());
  s.events[1].text = "b";
  s.speech_rate_pct = 0;
  EXPECT_FALSE(ValidateSession(s).empty());
}

TEST(SessionTest, FullTranscriptSkipsOtherChannels) {
  auto s = testing::MakeSession(
      "s", "wf", Terminal("jaws"),
      {testing::Sr(0, 1, "hello"), testing::Call(0.5, 2, "call"), testing::Sr(2, 3, "world")});
  EXPECT_EQ(FullTranscript(s), "hello world");
}

TEST(ReaderKeyTest, Labels) {
  EXPECT_EQ(ReaderKey(Terminal("jaws")), "jaws");
  EXPECT_EQ(ReaderKey(Smartphone("talkback")), "talkback");
  EXPECT_EQ(ReaderKey(Concurrent("jaws", "voiceover")), "jaws+voiceover");
}

TEST(JsonTest, WorkflowRoundTrip) {
  const auto w = SampleWorkflow();
  EXPECT_EQ(WorkflowFromJson(ToJson(w)), w);
}

TEST(JsonTest, SessionRoundTrip) {
  auto s = testing::MakeSession("s", "wf", Concurrent("jaws", "voiceover"),
                                {testing::Sr(0, 1.25, "a"), testing::Call(0.5, 2, "b")});
  s.headphones_on_terminal = true;
  EXPECT_EQ(SessionFromJson(ToJson(s)), s);
}

TEST(JsonTest, ProfileAndCatalogRoundTrip) {
  for (const auto& p : ingest::LoadProfileDir(kDataDir / "profiles")) {
    EXPECT_EQ(ProfileFromJson(ToJson(p)), p) << p.id;
  }
  const auto catalog = ingest::LoadCatalog(kDataDir / "catalog.json");
  Json arr = Json::array();
  for (const auto& m : catalog) arr.push_back(ToJson(m));
  EXPECT_EQ(CatalogFromJson(arr), catalog);
}

TEST(JsonTest, SchemaErrorNamesNestedField) {
  Json j = ToJson(testing::MakeSession("s", "wf", Terminal("jaws"),
                                       {testing::Sr(0, 1, "a"), testing::Sr(1, 2, "b")}));
  j["events"][1].erase("text");
  try {
    SessionFromJson(j);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "events[1].text");
  }
}

TEST(JsonTest, UnknownEnumValueIsSchemaError) {
  Json j = ToJson(SampleWorkflow());
  j["setting"]["kind"] = "TABLET";
  EXPECT_THROW(WorkflowFromJson(j), SchemaError);
}

TEST(JsonTest, TimestampsRoundedToMillis) {
  Json j = ToJson(testing::MakeSession("s", "wf", Terminal("jaws"), {testing::Sr(0, 1, "a")}));
  j["events"][0]["t_end_s"] = 1.23456;
  EXPECT_DOUBLE_EQ(SessionFromJson(j).events[0].t_end_s, 1.235);
}

}  // namespace
}  // namespace srauth
