#include "srauth/numberspeak.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "srauth/error.hpp"
#include "srauth/similarity.hpp"

namespace srauth::numberspeak {
namespace {

constexpr std::array<std::string_view, 20> kSmall = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

constexpr std::array<std::string_view, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};

struct Scale {
  std::string_view word;
  std::uint64_t value;
};
constexpr std::array<Scale, 3> kScales = {{
    {"billion", 1'000'000'000ULL},
    {"million", 1'000'000ULL},
    {"thousand", 1'000ULL},
}};

int SmallValue(std::string_view w) {
  for (std::size_t i = 0; i < kSmall.size(); ++i) {
    if (kSmall[i] == w) return static_cast<int>(i);
  }
  return -1;
}

int TensValue(std::string_view w) {
  for (std::size_t i = 2; i < kTens.size(); ++i) {
    if (kTens[i] == w) return static_cast<int>(i * 10);
  }
  return -1;
}

std::uint64_t ScaleValue(std::string_view w) {
  for (const auto& s : kScales) {
    if (s.word == w) return s.value;
  }
  return 0;
}

bool IsUnit(std::string_view w) {
  const int v = SmallValue(w);
  return v >= 1 && v <= 9;
}

struct Cursor {
  std::vector<std::pair<std::string, std::size_t>> toks;  // word, original index
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& word() const { return toks[pos].first; }
  std::size_t index() const { return toks[pos].second; }
  [[noreturn]] void Fail(const std::string& why) const { throw ParseError(word(), index(), why); }
};

// One group in [1, 999]: [unit "hundred"] [tens [unit] | teen | unit].
std::uint64_t ParseGroup(Cursor& c) {
  std::uint64_t v = 0;
  bool consumed = false;
  if (!c.done() && IsUnit(c.word()) && c.pos + 1 < c.toks.size() &&
      c.toks[c.pos + 1].first == "hundred") {
    v = static_cast<std::uint64_t>(SmallValue(c.word())) * 100;
    c.pos += 2;
    consumed = true;
  }
  if (!c.done()) {
    if (int t = TensValue(c.word()); t > 0) {
      v += static_cast<std::uint64_t>(t);
      ++c.pos;
      consumed = true;
      if (!c.done() && IsUnit(c.word())) {
        v += static_cast<std::uint64_t>(SmallValue(c.word()));
        ++c.pos;
      }
    } else if (int s = SmallValue(c.word()); s >= 1) {
      v += static_cast<std::uint64_t>(s);
      ++c.pos;
      consumed = true;
    }
  }
  if (!consumed) {
    if (c.done()) throw ParseError("", c.toks.empty() ? 0 : c.toks.back().second + 1,
                                   "expected a number word");
    c.Fail("expected a number word");
  }
  return v;
}

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isdigit(static_cast<unsigned char>(ch));
  });
}

void AppendGroupWords(std::uint64_t n, std::vector<std::string>& out) {
  if (n >= 100) {
    out.emplace_back(kSmall[n / 100]);
    out.emplace_back("hundred");
    n %= 100;
  }
  if (n >= 20) {
    out.emplace_back(kTens[n / 10]);
    n %= 10;
    if (n > 0) out.emplace_back(kSmall[n]);
  } else if (n > 0) {
    out.emplace_back(kSmall[n]);
  }
}

// One spoken unit of the transcript, mapped back to its source token.
struct Unit {
  std::string word;
  std::size_t global_token;
};

struct Stream {
  std::vector<Unit> units;
  std::vector<std::pair<std::size_t, std::size_t>> token_origin;  // global token -> (event, offset)
};

enum class StreamMode { kDigits, kNumeric };

Stream BuildStream(const SessionRecord& session, StreamMode mode) {
  Stream s;
  for (std::size_t ei = 0; ei < session.events.size(); ++ei) {
    const auto& ev = session.events[ei];
    if (ev.channel != Channel::kScreenReader) continue;
    const auto tokens = similarity::Tokenize(ev.text);
    for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
      const std::size_t g = s.token_origin.size();
      s.token_origin.emplace_back(ei, ti);
      const std::string& tok = tokens[ti];
      if (AllDigits(tok)) {
        for (char ch : tok) s.units.push_back({std::string(kSmall[ch - '0']), g});
      } else if (mode == StreamMode::kDigits && tok == "oh") {
        s.units.push_back({"zero", g});
      } else if (mode == StreamMode::kNumeric && tok == "and") {
        continue;
      } else {
        s.units.push_back({tok, g});
      }
    }
  }
  return s;
}

std::optional<TokenSpan> FindSequence(const Stream& s, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > s.units.size()) return std::nullopt;
  auto it = std::search(s.units.begin(), s.units.end(), needle.begin(), needle.end(),
                        [](const Unit& u, const std::string& w) { return u.word == w; });
  if (it == s.units.end()) return std::nullopt;
  const std::size_t first = it->global_token;
  const std::size_t last = (it + static_cast<std::ptrdiff_t>(needle.size() - 1))->global_token;
  const auto [event, offset] = s.token_origin[first];
  return TokenSpan{event, offset, last - first + 1};
}

}  // namespace

std::uint64_t WordsToNumber(std::span<const std::string> words) {
  Cursor c;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] != "and") c.toks.emplace_back(words[i], i);
  }
  if (c.toks.empty()) throw ParseError("", 0, "no number words");

  if (c.word() == "zero") {
    if (c.toks.size() > 1) {
      c.pos = 1;
      c.Fail("nothing may follow 'zero'");
    }
    return 0;
  }

  std::uint64_t total = 0;
  std::uint64_t last_scale = kMaxCardinal + 1;
  while (!c.done()) {
    const std::uint64_t group = ParseGroup(c);
    if (c.done()) {
      total += group;
      break;
    }
    const std::uint64_t scale = ScaleValue(c.word());
    if (scale == 0) c.Fail("unexpected word after a complete number group");
    if (scale >= last_scale) c.Fail("scale word out of order");
    total += group * scale;
    last_scale = scale;
    ++c.pos;
  }
  return total;
}

std::vector<std::string> NumberToNumericWords(std::uint64_t n) {
  if (n > kMaxCardinal) {
    throw RangeError("number " + std::to_string(n) + " exceeds " + std::to_string(kMaxCardinal));
  }
  if (n == 0) return {"zero"};
  std::vector<std::string> out;
  for (const auto& s : kScales) {
    if (n >= s.value) {
      AppendGroupWords(n / s.value, out);
      out.emplace_back(s.word);
      n %= s.value;
    }
  }
  AppendGroupWords(n, out);
  return out;
}

std::vector<std::string> NumberToDigitWords(std::string_view digits) {
  std::vector<std::string> out;
  out.reserve(digits.size());
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw RangeError(std::string("not a digit: '") + ch + "'");
    }
    out.emplace_back(kSmall[ch - '0']);
  }
  return out;
}

std::optional<std::vector<std::string>> DigitStringToNumericWords(std::string_view digits) {
  std::size_t zeros = 0;
  while (zeros < digits.size() && digits[zeros] == '0') ++zeros;
  std::vector<std::string> out(zeros, "zero");
  const std::string_view rest = digits.substr(zeros);
  if (rest.empty()) return out;
  if (rest.size() > 12) return std::nullopt;
  const std::uint64_t value = std::stoull(std::string(rest));
  if (value > kMaxCardinal) return std::nullopt;
  for (auto& w : NumberToNumericWords(value)) out.push_back(std::move(w));
  return out;
}

std::string_view ToString(Pronunciation p) {
  switch (p) {
    case Pronunciation::kDigitByDigit: return "DIGIT_BY_DIGIT";
    case Pronunciation::kNumericWhole: return "NUMERIC_WHOLE";
    case Pronunciation::kNumericGrouped: return "NUMERIC_GROUPED";
    case Pronunciation::kAbsent: return "ABSENT";
  }
  return "?";
}

OtpPronunciation ClassifyOtp(const SessionRecord& session, std::string_view otp) {
  const std::string digits = OtpDigits(otp);
  if (digits.empty()) return {};

  const Stream digit_stream = BuildStream(session, StreamMode::kDigits);
  if (auto span = FindSequence(digit_stream, NumberToDigitWords(digits))) {
    return {Pronunciation::kDigitByDigit, span};
  }

  const Stream numeric_stream = BuildStream(session, StreamMode::kNumeric);
  if (auto whole = DigitStringToNumericWords(digits)) {
    if (auto span = FindSequence(numeric_stream, *whole)) {
      return {Pronunciation::kNumericWhole, span};
    }
  }

  std::vector<std::string> grouped;
  for (const auto& g : OtpGroups(otp)) {
    auto words = DigitStringToNumericWords(g);
    if (!words) return {};
    grouped.insert(grouped.end(), words->begin(), words->end());
  }
  if (auto span = FindSequence(numeric_stream, grouped)) {
    return {Pronunciation::kNumericGrouped, span};
  }
  return {};
}

}  // namespace srauth::numberspeak
