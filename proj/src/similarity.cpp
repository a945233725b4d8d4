#include "srauth/similarity.hpp"

#include <cctype>

#include <algorithm>
#include <cmath>
#include <set>

#include "srauth/error.hpp"

namespace srauth::similarity {

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<TokenVector> TfidfVectors(std::span<const std::vector<std::string>> docs) {
  if (docs.empty()) throw Error("tfidf: corpus has no documents");

  std::vector<std::map<std::string, double>> counts(docs.size());
  std::map<std::string, std::size_t> df;
  bool any = false;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : docs[d]) counts[d][t] += 1.0;
    for (const auto& [t, _] : counts[d]) ++df[t];
    any = any || !docs[d].empty();
  }
  if (!any) throw Error("tfidf: every document is empty");

  const double n = static_cast<double>(docs.size());
  std::map<std::string, double> idf;
  for (const auto& [t, f] : df) {
    idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(f))) + 1.0;
  }

  std::vector<TokenVector> out(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    double sq = 0.0;
    for (auto& [t, c] : counts[d]) {
      c *= idf[t];
      sq += c * c;
    }
    const double raw_norm = std::sqrt(sq);
    double norm_sq = 0.0;
    for (auto& [t, w] : counts[d]) {
      w /= raw_norm;
      norm_sq += w * w;
    }
    out[d].weights = std::move(counts[d]);
    out[d].norm = std::sqrt(norm_sq);
  }
  return out;
}

double Cosine(const TokenVector& u, const TokenVector& v) {
  if (u.norm == 0.0 || v.norm == 0.0) return 0.0;
  if (u.weights == v.weights) return 1.0;
  const auto& small = u.weights.size() <= v.weights.size() ? u.weights : v.weights;
  const auto& large = u.weights.size() <= v.weights.size() ? v.weights : u.weights;
  double dot = 0.0;
  for (const auto& [t, w] : small) {
    auto it = large.find(t);
    if (it != large.end()) dot += w * it->second;
  }
  return std::clamp(dot / (u.norm * v.norm), 0.0, 1.0);
}

SimilarityResult Comprehensibility(std::string_view original, std::string_view generated) {
  const std::vector<std::vector<std::string>> docs{Tokenize(original), Tokenize(generated)};
  SimilarityResult r;
  r.corpus_size = docs.size();
  if (docs[0].empty() && docs[1].empty()) {
    r.score = 1.0;
    r.degenerate = true;
    return r;
  }
  const std::set<std::string> a(docs[0].begin(), docs[0].end());
  for (const auto& t : std::set<std::string>(docs[1].begin(), docs[1].end())) {
    r.shared_tokens += a.count(t);
  }
  const auto vecs = TfidfVectors(docs);
  r.score = Cosine(vecs[0], vecs[1]);
  return r;
}

std::vector<SimilarityResult> ComprehensibilityBatchSerial(std::span<const TextPair> pairs) {
  std::vector<SimilarityResult> out;
  out.reserve(pairs.size());
  for (const auto& [o, g] : pairs) out.push_back(Comprehensibility(o, g));
  return out;
}

std::vector<SimilarityResult> ComprehensibilityBatch(std::span<const TextPair> pairs) {
  std::vector<SimilarityResult> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = Comprehensibility(pairs[i].first, pairs[i].second);
  }
  return out;
}

}  // namespace srauth::similarity
