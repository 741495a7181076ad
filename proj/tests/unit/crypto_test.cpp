#include <gtest/gtest.h>

#include <random>
#include <set>

#include "codewe/crypto/hash.hpp"
#include "codewe/crypto/signature.hpp"
#include "vectors.hpp"

using namespace codewe;
using namespace codewe::crypto;
using codewe::testing::kNist;
using codewe::testing::kRfc8032;


TEST(Sha256, NistVectors) {
  for (const auto& v : kNist) EXPECT_EQ(hash(v.message).hex(), v.digest) << v.message.size();
}

TEST(Sha256, ConcatMatchesWholeInput) {
  const std::string a = "abcdbcdecdefdefgefghfghighijhijk", b = "ijkljklmklmnlmnomnopnopq";
  EXPECT_EQ(hash_concat({as_bytes(a), as_bytes(b)}).hex(), kNist[2].digest);
  EXPECT_EQ(hash_concat({}).hex(), kNist[0].digest);
}

TEST(Sha256, NoCollisionsOverDistinctRandomInputs) {
  std::mt19937_64 rng(1);
  std::set<std::string> inputs;
  std::set<Digest> digests;
  while (inputs.size() < 100000) {
    std::string s(1 + rng() % 40, '\0');
    for (auto& c : s) c = static_cast<char>(rng());
    if (inputs.insert(s).second) digests.insert(hash(s));
  }
  EXPECT_EQ(digests.size(), inputs.size());
}

TEST(Hex, LowercaseOnly) {
  EXPECT_EQ(to_hex(from_hex("00ff7a")), "00ff7a");
  EXPECT_THROW(from_hex("00FF"), Error);
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
  EXPECT_THROW(digest_from_hex(std::string(64, 'A')), Error);
  try {
    digest_from_hex("00");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidHex);
  }
}

TEST(Ed25519, Rfc8032Vectors) {
  for (const auto& v : kRfc8032) {
    auto keys = keygen(ByteView(from_hex(v.secret)));
    EXPECT_EQ(keys.public_key.hex(), v.public_key);
    const auto msg = from_hex(v.message);
    auto sig = sign(keys.private_key, ByteView(msg));
    EXPECT_EQ(sig.hex(), v.signature);
    EXPECT_TRUE(verify(keys.public_key, ByteView(msg), sig));
    EXPECT_TRUE(verify_raw(keys.public_key.view(), msg, from_hex(v.signature)));
  }
}

TEST(Ed25519, SeededKeygenIsDeterministic) {
  const auto seed = from_hex(kRfc8032[0].secret);
  EXPECT_EQ(keygen(ByteView(seed)).public_key, keygen(ByteView(seed)).public_key);
}

TEST(Ed25519, UnseededKeysAreDistinct) {
  std::set<PublicKey> keys;
  for (int i = 0; i < 10000; ++i) keys.insert(keygen().public_key);
  EXPECT_EQ(keys.size(), 10000u);
}

TEST(Ed25519, MalformedSeedRejected) {
  for (std::size_t n : {0u, 16u, 31u, 33u, 64u}) {
    Bytes seed(n, 7);
    try {
      keygen(ByteView(seed));
      FAIL() << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidSeed);
    }
  }
}

TEST(Ed25519, EveryMessageAndSignatureBitFlipFails) {
  auto keys = keygen(ByteView(from_hex(kRfc8032[2].secret)));
  Bytes msg = from_hex("af82deadbeef");
  auto sig = sign(keys.private_key, ByteView(msg));
  for (std::size_t bit = 0; bit < msg.size() * 8; ++bit) {
    Bytes m = msg;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(verify(keys.public_key, ByteView(m), sig)) << bit;
  }
  for (std::size_t bit = 0; bit < 512; ++bit) {
    auto s = sig;
    s.array()[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(verify(keys.public_key, ByteView(msg), s)) << bit;
  }
}

TEST(Ed25519, MismatchedKeysNeverVerify) {
  const std::string msg = "survey response";
  for (int i = 0; i < 100; ++i) {
    auto signer = keygen();
    auto other = keygen();
    EXPECT_FALSE(verify(other.public_key, msg, sign(signer.private_key, msg)));
  }
}

TEST(Ed25519, WrongLengthsAreInvalidKeyMaterial) {
  Bytes pk(31, 1), sig(64, 1), msg;
  try {
    verify_raw(pk, msg, sig);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidKeyMaterial);
  }
  Bytes pk32(32, 1), sig63(63, 1);
  EXPECT_THROW(verify_raw(pk32, msg, sig63), Error);
}
