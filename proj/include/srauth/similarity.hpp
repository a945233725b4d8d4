#pragma once

// Lexical comprehensibility: how much of a ground-truth workflow text is
// recoverable from a speech-to-text transcript of the screen reader's output,
// measured as TF-IDF cosine similarity.
//
// Pinned math:
//   tf(t,d)  = raw count of t in d
//   idf(t)   = ln((1 + N) / (1 + df(t))) + 1
//   w(t,d)   = tf * idf, then each document vector is L2-normalized
//   cosine   = dot(u,v) / (|u| |v|), 0 when either norm is 0, clamped to [0,1]

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srauth::similarity {

// Lowercases and splits on anything that is not an ASCII letter or digit.
// Bytes outside ASCII are treated as separators.
std::vector<std::string> Tokenize(std::string_view text);

struct TokenVector {
  std::map<std::string, double> weights;
  double norm = 0.0;
};

// Throws srauth::Error when docs is empty or every document is empty.
std::vector<TokenVector> TfidfVectors(std::span<const std::vector<std::string>> docs);

double Cosine(const TokenVector& u, const TokenVector& v);

struct SimilarityResult {
  double score = 0.0;            // fraction in [0,1]
  std::size_t shared_tokens = 0; // distinct tokens present in both texts
  std::size_t corpus_size = 0;   // N
  bool degenerate = false;       // both texts tokenized to nothing

  double percent() const { return score * 100.0; }
};

// Builds TF-IDF over the two-document corpus {original, generated}.
SimilarityResult Comprehensibility(std::string_view original, std::string_view generated);

// Batch scoring over (original, generated) pairs. The parallel version
// distributes pairs over OpenMP threads; the serial one is the reference.
using TextPair = std::pair<std::string, std::string>;
std::vector<SimilarityResult> ComprehensibilityBatch(std::span<const TextPair> pairs);
std::vector<SimilarityResult> ComprehensibilityBatchSerial(std::span<const TextPair> pairs);

}  // namespace srauth::similarity
