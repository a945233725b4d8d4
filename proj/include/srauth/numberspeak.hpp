#pragma once

// English cardinal number words, and detection of how a one-time code was
// spoken in a transcript (digit by digit, as one quantity, or as per-group
// quantities such as "one hundred twenty three, four hundred fifty six").

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srauth/model.hpp"

namespace srauth::numberspeak {

inline constexpr std::uint64_t kMaxCardinal = 999'999'999'999ULL;

// Parses tokens such as {"one","thousand","two","hundred","thirty","four"}.
// "and" is accepted anywhere and ignored. Throws ParseError naming the first
// offending token and its index.
std::uint64_t WordsToNumber(std::span<const std::string> words);

// Canonical American-English form without "and"; compound tens are split
// ("thirty","four"). Throws RangeError above kMaxCardinal.
std::vector<std::string> NumberToNumericWords(std::uint64_t n);

// Each digit spelled independently, "0" -> "zero". Throws RangeError on a
// non-digit character.
std::vector<std::string> NumberToDigitWords(std::string_view digits);

// Numeric reading of a digit string that may carry leading zeros: one
// "zero" per leading zero, then the quantity of the rest. Returns nullopt
// when the quantity is out of range.
std::optional<std::vector<std::string>> DigitStringToNumericWords(std::string_view digits);

struct TokenSpan {
  std::size_t event_index = 0;  // event holding the first matched token
  std::size_t token_begin = 0;  // offset of that token within the event
  std::size_t token_count = 0;  // may run past the event's end into later events
};

enum class Pronunciation { kDigitByDigit, kNumericWhole, kNumericGrouped, kAbsent };

struct OtpPronunciation {
  Pronunciation style = Pronunciation::kAbsent;
  std::optional<TokenSpan> matched_span;  // empty iff style is kAbsent
};

std::string_view ToString(Pronunciation p);

// Looks for the code in SCREEN_READER events, in priority order
// DIGIT_BY_DIGIT > NUMERIC_WHOLE > NUMERIC_GROUPED. Literal digits in the
// transcript count as their digit words; "oh" is read as zero only for the
// digit-by-digit form. Precondition: IsValidOtp(otp).
OtpPronunciation ClassifyOtp(const SessionRecord& session, std::string_view otp);

}  // namespace srauth::numberspeak
