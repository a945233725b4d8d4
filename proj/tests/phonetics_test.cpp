#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "srauth/error.hpp"
#include "srauth/phonetics.hpp"

namespace srauth::phonetics {
namespace {

// Full-matrix Levenshtein; independent of the engine's rolling-row version.
std::size_t OracleDistance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

double OracleSimilarity(const std::string& d1, const std::string& d2) {
  const auto a = MakeSpokenKey(d1).key, b = MakeSpokenKey(d2).key;
  if (a == b) return 1.0;
  return 1.0 - static_cast<double>(OracleDistance(a, b)) /
                   static_cast<double>(std::max(a.size(), b.size()));
}

// Distinct brands that a listener tells apart.
const std::vector<std::pair<std::string, std::string>> kDistinctBrands = {
    {"bankofamerica.com", "wellsfargo.com"}, {"chase.com", "citi.com"},
    {"paypal.com", "venmo.com"},             {"google.com", "yahoo.com"},
    {"amazon.com", "ebay.com"},              {"apple.com", "microsoft.com"},
    {"facebook.com", "twitter.com"},         {"netflix.com", "hulu.com"},
    {"github.com", "gitlab.com"},            {"dropbox.com", "box.com"},
    {"usbank.com", "pnc.com"},               {"capitalone.com", "discover.com"},
    {"americanexpress.com", "mastercard.com"}, {"outlook.com", "gmail.com"},
    {"linkedin.com", "instagram.com"},       {"spotify.com", "pandora.com"},
    {"walmart.com", "target.com"},           {"fidelity.com", "vanguard.com"},
    {"schwab.com", "etrade.com"},            {"irs.gov", "ssa.gov"},
    {"coinbase.com", "binance.com"},         {"zoom.us", "slack.com"},
};

TEST(SpokenKeyTest, StripsAndNormalizes) {
  EXPECT_EQ(MakeSpokenKey("https://user@Login.BankOfAmerica.com:443/x?y#z").key,
            MakeSpokenKey("bankofamerica.com").key);
  EXPECT_EQ(MakeSpokenKey("phish.com").key, "fishkom");
  EXPECT_EQ(MakeSpokenKey("quick.xyz").key, "kwikksys");
  EXPECT_EQ(MakeSpokenKey("whizz.ca").key, "wiska");
  EXPECT_THROW(MakeSpokenKey(""), Error);
  EXPECT_THROW(MakeSpokenKey("123.456"), Error);
}

TEST(SpokenKeyTest, KeyHoldsOnlyLowercaseLetters) {
  for (const auto& [a, b] : kDistinctBrands) {
    for (const auto& d : {a, b}) {
      const auto k = MakeSpokenKey(d).key;
      EXPECT_TRUE(std::all_of(k.begin(), k.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
          << d;
    }
  }
}

TEST(SpokenSimilarityTest, DoubledLetterPairsMatchExactly) {
  EXPECT_EQ(SpokenSimilarity("bankofamerica.com", "bankoffamerica.com"), 1.0);
  EXPECT_EQ(SpokenSimilarity("wellsfargo.com", "wellssfargo.com"), 1.0);
  EXPECT_EQ(SpokenSimilarity("abc.com", "abc.com"), 1.0);
}

TEST(SpokenSimilarityTest, DistinctBrandsStayBelowThreshold) {
  ASSERT_GE(kDistinctBrands.size(), 20u);
  for (const auto& [a, b] : kDistinctBrands) {
    EXPECT_LT(SpokenSimilarity(a, b), kDefaultThreshold) << a << " vs " << b;
  }
}

TEST(SpokenSimilarityTest, MatchesOracle) {
  EXPECT_DOUBLE_EQ(SpokenSimilarity("example.com", "zq.org"),
                   OracleSimilarity("example.com", "zq.org"));
  EXPECT_LT(SpokenSimilarity("example.com", "zq.org"), 0.8);
  for (const auto& [a, b] : kDistinctBrands) {
    EXPECT_DOUBLE_EQ(SpokenSimilarity(a, b), OracleSimilarity(a, b)) << a << " vs " << b;
  }
}

TEST(EditDistanceTest, RandomStringsMatchOracle) {
  std::mt19937 rng(17);
  for (int i = 0; i < 500; ++i) {
    auto gen = [&] {
      std::string s(rng() % 12, 'a');
      for (auto& c : s) c = static_cast<char>('a' + rng() % 4);
      return s;
    };
    const auto a = gen(), b = gen();
    ASSERT_EQ(EditDistance(a, b), OracleDistance(a, b)) << a << " " << b;
  }
}

TEST(PropertyTest, SymmetricAndReflexive) {
  for (const auto& [a, b] : kDistinctBrands) {
    EXPECT_EQ(SpokenSimilarity(a, b), SpokenSimilarity(b, a));
    EXPECT_EQ(SpokenSimilarity(a, a), 1.0);
  }
}

TEST(PropertyTest, DoublingAnyLetterKeepsKey) {
  for (const auto& [a, b] : kDistinctBrands) {
    for (const auto& d : {a, b}) {
      const auto key = MakeSpokenKey(d).key;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isalpha(static_cast<unsigned char>(d[i]))) continue;
        std::string doubled = d;
        doubled.insert(i, 1, d[i]);
        EXPECT_EQ(MakeSpokenKey(doubled).key, key) << doubled;
      }
    }
  }
}

TEST(FlagTest, LookalikeFlaggedExactTrustedIsNot) {
  const std::vector<std::string> trusted = {"bankofamerica.com", "wellsfargo.com", "chase.com"};
  auto flags = FlagLookalikes("bankoffamerica.com", trusted);
  ASSERT_EQ(flags.size(), 1u);
  EXPECT_EQ(flags[0].trusted_domain, "bankofamerica.com");
  EXPECT_EQ(flags[0].similarity, 1.0);
  EXPECT_TRUE(FlagLookalikes("bankofamerica.com", trusted).empty());
  EXPECT_TRUE(FlagLookalikes("example.org", trusted).empty());
}

TEST(FlagTest, SortedAndAboveThreshold) {
  const std::vector<std::string> trusted = {"abcdefghij.com", "abcdefghik.com", "abcdefghjj.com",
                                            "zzz.com", "abcdefghij.org"};
  for (double threshold : {0.0, 0.5, 0.8, 0.9, 1.0}) {
    const auto flags = FlagLookalikes("abcdefghii.com", trusted, threshold);
    for (std::size_t i = 0; i < flags.size(); ++i) {
      EXPECT_GE(flags[i].similarity, threshold);
      if (i > 0) {
        EXPECT_TRUE(flags[i - 1].similarity > flags[i].similarity ||
                    (flags[i - 1].similarity == flags[i].similarity &&
                     flags[i - 1].trusted_domain < flags[i].trusted_domain));
      }
    }
  }
}

TEST(FlagTest, ParallelMatchesSerial) {
  std::vector<std::string> trusted;
  std::mt19937 rng(8);
  for (int i = 0; i < 300; ++i) {
    std::string s(6 + rng() % 6, 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng() % 5);
    trusted.push_back(s + ".com");
  }
  for (double threshold : {0.5, 0.7, 0.9}) {
    const auto par = FlagLookalikes("abcabcab.com", trusted, threshold);
    const auto ser = FlagLookalikesSerial("abcabcab.com", trusted, threshold);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      EXPECT_EQ(par[i].trusted_domain, ser[i].trusted_domain);
      EXPECT_EQ(par[i].similarity, ser[i].similarity);
    }
  }
}

TEST(TrustedListTest, CommentsAndBlanks) {
  EXPECT_EQ(ParseTrustedList("# banks\nbankofamerica.com\n\n  chase.com  # retail\r\n#x\n"),
            (std::vector<std::string>{"bankofamerica.com", "chase.com"}));
}

}  // namespace
}  // namespace srauth::phonetics
