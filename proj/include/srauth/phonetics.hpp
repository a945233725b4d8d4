#pragma once

// Spoken-form model of domain names. Screen readers announce a domain as
// whole words, so a doubled letter or a homophone spelling is inaudible. The
// key built here approximates what the listener hears:
//
//   1. strip scheme, credentials, port, path, query and fragment
//   2. keep the last two dot-separated labels (no public-suffix handling)
//   3. lowercase and drop everything that is not a letter
//   4. collapse runs of the same letter
//   5. rewrite, in order: ph->f, ck->k, qu->kw, x->ks, c(e|i|y)->s, c->k,
//      z->s, wh->w

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srauth::phonetics {

struct SpokenKey {
  std::string key;            // lowercase letters only
  std::string source_domain;
};

// Throws srauth::Error when the domain is empty or holds no letters.
SpokenKey MakeSpokenKey(std::string_view domain);

// Classic Levenshtein distance (unit insert/delete/substitute).
std::size_t EditDistance(std::string_view a, std::string_view b);

// 1.0 when keys are equal, else 1 - distance / max key length.
double SpokenSimilarity(std::string_view d1, std::string_view d2);

inline constexpr double kDefaultThreshold = 0.9;

struct LookalikeFlag {
  std::string trusted_domain;
  double similarity = 0.0;
};

// Trusted domains whose spoken form is at least `threshold` similar to the
// candidate, most similar first (ties by domain name). A candidate that is
// literally one of the trusted domains is never flagged. Trusted entries
// without letters are skipped.
std::vector<LookalikeFlag> FlagLookalikes(std::string_view candidate,
                                          std::span<const std::string> trusted,
                                          double threshold = kDefaultThreshold);
std::vector<LookalikeFlag> FlagLookalikesSerial(std::string_view candidate,
                                                std::span<const std::string> trusted,
                                                double threshold = kDefaultThreshold);

// Reads a trusted list: one domain per line, '#' starts a comment, blank
// lines ignored.
std::vector<std::string> ParseTrustedList(std::string_view text);

}  // namespace srauth::phonetics
