#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "srauth/model.hpp"

namespace srauth {

using Json = nlohmann::ordered_json;

// Serializers write every field under its lower_snake_case name. Readers
// throw SchemaError naming the offending field path (e.g. "events[3].text").
// Unknown fields are ignored.

Json ToJson(const AuthMethod& m);
Json ToJson(const PlatformSetting& s);
Json ToJson(const ScreenReaderProfile& p);
Json ToJson(const CriticalElement& e);
Json ToJson(const WorkflowSpec& w);
Json ToJson(const TranscriptEvent& e);
Json ToJson(const SessionRecord& s);

AuthMethod AuthMethodFromJson(const Json& j, const std::string& path = "");
PlatformSetting SettingFromJson(const Json& j, const std::string& path = "setting");
ScreenReaderProfile ProfileFromJson(const Json& j, const std::string& path = "");
WorkflowSpec WorkflowFromJson(const Json& j);
SessionRecord SessionFromJson(const Json& j);
std::vector<AuthMethod> CatalogFromJson(const Json& j);

Json ReadJsonFile(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);
// Writes UTF-8 without BOM, trailing newline.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace srauth
