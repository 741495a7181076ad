#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "codewe/crypto/canonical.hpp"
#include "scenario.hpp"

using namespace codewe;
using canonical::Document;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::RateLimited;
}

// Random document over the encodable kinds; ASCII-only strings so that
// structural equality and NFC equality coincide.
Document random_doc(std::mt19937_64& rng, int depth) {
  const int kind = static_cast<int>(rng() % (depth > 0 ? 6 : 4));
  switch (kind) {
    case 0: return static_cast<std::int64_t>(rng() % 7) - 3;
    case 1: return (rng() & 1) != 0;
    case 2: return std::string(1 + rng() % 3, static_cast<char>('a' + rng() % 3));
    case 3: return static_cast<std::uint64_t>(rng());
    case 4: {
      Document a = Document::array();
      for (std::size_t i = rng() % 3; i > 0; --i) a.push_back(random_doc(rng, depth - 1));
      return a;
    }
    default: {
      Document o = Document::object();
      for (std::size_t i = rng() % 4; i > 0; --i) o[std::string(1, static_cast<char>('a' + rng() % 4))] = random_doc(rng, depth - 1);
      return o;
    }
  }
}

// Writes an object as JSON text with its keys in a shuffled order.
std::string shuffled_text(const Document& v, std::mt19937_64& rng) {
  if (v.is_object()) {
    std::vector<std::string> keys;
    for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
    std::shuffle(keys.begin(), keys.end(), rng);
    std::string out = "{ ";
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += " ,\n";
      out += Document(keys[i]).dump() + " : " + shuffled_text(v.at(keys[i]), rng);
    }
    return out + " }";
  }
  if (v.is_array()) {
    std::string out = "[ ";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += shuffled_text(v[i], rng);
    }
    return out + " ]";
  }
  return v.dump();
}

}  // namespace

TEST(Canonical, SortedKeysNoWhitespace) {
  EXPECT_EQ(canonical::encode(Document::parse(R"({"b":2,"a":1})")), R"({"a":1,"b":2})");
  EXPECT_EQ(canonical::encode(Document::object()), "{}");
  EXPECT_EQ(canonical::encode(Document::array()), "[]");
  EXPECT_EQ(canonical::encode(Document::parse(R"({"z":[true,false,-5,"x"]})")), R"({"z":[true,false,-5,"x"]})");
}

TEST(Canonical, KeyInsertionOrderDoesNotMatter) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Document d = random_doc(rng, 3);
    const auto expected = canonical::encode(d);
    for (int p = 0; p < 5; ++p) EXPECT_EQ(canonical::encode(Document::parse(shuffled_text(d, rng))), expected);
  }
}

TEST(Canonical, EqualityIffEqualEncoding) {
  std::mt19937_64 rng(11);
  std::vector<Document> docs;
  for (int i = 0; i < 400; ++i) docs.push_back(random_doc(rng, 2));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = i; j < docs.size(); ++j) {
      EXPECT_EQ(docs[i] == docs[j], canonical::encode(docs[i]) == canonical::encode(docs[j])) << docs[i] << docs[j];
    }
  }
}

TEST(Canonical, UnsupportedKinds) {
  EXPECT_EQ(code_of([] { canonical::encode(Document(1.5)); }), ErrorCode::EncodingUnsupported);
  EXPECT_EQ(code_of([] { canonical::encode(Document::parse(R"({"a":[null]})")); }), ErrorCode::EncodingUnsupported);
  EXPECT_EQ(code_of([] { canonical::encode(Document::binary({1, 2})); }), ErrorCode::EncodingUnsupported);
  EXPECT_EQ(code_of([] { canonical::encode(Document(std::string("\xff\xfe"))); }), ErrorCode::EncodingUnsupported);
  // "Å" precomposed and decomposed collide once normalised.
  Document collide = {{"\xc3\x85", 1}, {"A\xcc\x8a", 2}};
  EXPECT_EQ(code_of([&] { canonical::encode(collide); }), ErrorCode::EncodingUnsupported);
}

TEST(Canonical, StringsAreNfcNormalised) {
  EXPECT_EQ(canonical::encode(Document("Cafe\xcc\x81")), "\"Caf\xc3\xa9\"");
  EXPECT_EQ(canonical::nfc("\xe2\x84\xab"), "\xc3\x85");  // ANGSTROM SIGN
}

TEST(Canonical, EscapesOnlyWhatJsonRequires) {
  EXPECT_EQ(canonical::encode(Document("a\"b\\c\n\x01\x7f/")), R"("a\"b\\c\n\u0001)" "\x7f" R"(/")");
}

TEST(Canonical, DecodeRejectsNonCanonicalText) {
  EXPECT_EQ(canonical::decode(R"({"a":1,"b":[2]})"), Document::parse(R"({"a":1,"b":[2]})"));
  for (const char* bad : {R"({"b":1,"a":2})", R"({ "a":1})", R"({"a":1.0})", R"({"a":01})", R"("\u0041")",
                          "\"Cafe\xcc\x81\"", R"({"a":null})", R"({"a":1} )", "", "{"}) {
    EXPECT_EQ(code_of([&] { canonical::decode(bad); }), ErrorCode::EncodingUnsupported) << bad;
  }
}

TEST(Canonical, GoldenFixtures) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(CODEWE_GOLDEN_DIR) / "canonical";
  std::ifstream manifest(dir / "manifest.tsv");
  ASSERT_TRUE(manifest) << dir;
  std::string line;
  int count = 0;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto stem = line.substr(0, tab), digest = line.substr(tab + 1);
    const auto input = codewe::testing::read_text(dir / (stem + ".input.json"));
    const auto expected = codewe::testing::read_text(dir / (stem + ".canonical"));
    const auto encoded = canonical::encode(Document::parse(input));
    EXPECT_EQ(encoded, expected) << stem;
    EXPECT_EQ(crypto::hash(encoded).hex(), digest) << stem;
    EXPECT_EQ(canonical::encode(canonical::decode(expected)), expected) << stem;
    ++count;
  }
  EXPECT_EQ(count, 20);
}
