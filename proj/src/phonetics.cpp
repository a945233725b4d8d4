#include "srauth/phonetics.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "srauth/error.hpp"

namespace srauth::phonetics {
namespace {

std::string_view HostPart(std::string_view d) {
  if (auto p = d.find("://"); p != std::string_view::npos) d.remove_prefix(p + 3);
  if (auto p = d.find_first_of("/?#"); p != std::string_view::npos) d = d.substr(0, p);
  if (auto p = d.rfind('@'); p != std::string_view::npos) d.remove_prefix(p + 1);
  if (auto p = d.find(':'); p != std::string_view::npos) d = d.substr(0, p);
  while (!d.empty() && d.back() == '.') d.remove_suffix(1);
  return d;
}

std::string RegistrableLabels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    auto dot = host.find('.', start);
    if (dot == std::string_view::npos) dot = host.size();
    if (dot > start) labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  std::string out;
  const std::size_t from = labels.size() > 2 ? labels.size() - 2 : 0;
  for (std::size_t i = from; i < labels.size(); ++i) out += labels[i];
  return out;
}

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, from.size(), from) == 0) {
      out += to;
      i += from.size();
    } else {
      out += s[i++];
    }
  }
  s = std::move(out);
}

void RewriteC(std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 'c') continue;
    const char next = i + 1 < s.size() ? s[i + 1] : '\0';
    s[i] = (next == 'e' || next == 'i' || next == 'y') ? 's' : 'k';
  }
}

}  // namespace

SpokenKey MakeSpokenKey(std::string_view domain) {
  if (domain.empty()) throw Error("spoken key: empty domain");
  const std::string labels = RegistrableLabels(HostPart(domain));

  std::string key;
  for (char ch : labels) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || !std::isalpha(c)) continue;
    const char lower = static_cast<char>(std::tolower(c));
    if (key.empty() || key.back() != lower) key.push_back(lower);
  }
  if (key.empty()) throw Error("spoken key: domain '" + std::string(domain) + "' has no letters");

  ReplaceAll(key, "ph", "f");
  ReplaceAll(key, "ck", "k");
  ReplaceAll(key, "qu", "kw");
  ReplaceAll(key, "x", "ks");
  RewriteC(key);
  ReplaceAll(key, "z", "s");
  ReplaceAll(key, "wh", "w");
  return {key, std::string(domain)};
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

double KeySimilarity(const std::string& k1, const std::string& k2) {
  if (k1 == k2) return 1.0;
  const double longest = static_cast<double>(std::max(k1.size(), k2.size()));
  return 1.0 - static_cast<double>(EditDistance(k1, k2)) / longest;
}

std::optional<LookalikeFlag> Check(const std::string& cand_key, const std::string& trusted,
                                   double threshold) {
  std::string tkey;
  try {
    tkey = MakeSpokenKey(trusted).key;
  } catch (const Error&) {
    return std::nullopt;
  }
  const double sim = KeySimilarity(cand_key, tkey);
  if (sim < threshold) return std::nullopt;
  return LookalikeFlag{trusted, sim};
}

void SortFlags(std::vector<LookalikeFlag>& flags) {
  std::sort(flags.begin(), flags.end(), [](const LookalikeFlag& a, const LookalikeFlag& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.trusted_domain < b.trusted_domain;
  });
}

bool IsTrusted(std::string_view candidate, std::span<const std::string> trusted) {
  return std::find(trusted.begin(), trusted.end(), candidate) != trusted.end();
}

}  // namespace

double SpokenSimilarity(std::string_view d1, std::string_view d2) {
  return KeySimilarity(MakeSpokenKey(d1).key, MakeSpokenKey(d2).key);
}

std::vector<LookalikeFlag> FlagLookalikesSerial(std::string_view candidate,
                                                std::span<const std::string> trusted,
                                                double threshold) {
  if (IsTrusted(candidate, trusted)) return {};
  const std::string key = MakeSpokenKey(candidate).key;
  std::vector<LookalikeFlag> out;
  for (const auto& t : trusted) {
    if (auto f = Check(key, t, threshold)) out.push_back(std::move(*f));
  }
  SortFlags(out);
  return out;
}

std::vector<LookalikeFlag> FlagLookalikes(std::string_view candidate,
                                          std::span<const std::string> trusted,
                                          double threshold) {
  if (IsTrusted(candidate, trusted)) return {};
  const std::string key = MakeSpokenKey(candidate).key;
  std::vector<std::optional<LookalikeFlag>> slots(trusted.size());
  const auto n = static_cast<std::ptrdiff_t>(trusted.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) slots[i] = Check(key, trusted[i], threshold);
  std::vector<LookalikeFlag> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  SortFlags(out);
  return out;
}

std::vector<std::string> ParseTrustedList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (!line.empty()) out.emplace_back(line);
    start = nl + 1;
  }
  return out;
}

}  // namespace srauth::phonetics
