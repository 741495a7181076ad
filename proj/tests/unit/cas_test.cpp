#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "codewe/cas/cas_store.hpp"
#include "scenario.hpp"

using namespace codewe;
using namespace codewe::testing;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::RateLimited;
}

// Every regular file under `root`, concatenated.
std::string all_bytes(const fs::path& root) {
  std::string out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out += read_text(e.path());
  }
  return out;
}

}  // namespace

TEST(Cas, PutIsIdempotentAndContentAddressed) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  auto a = store.put(std::string_view("abc"));
  EXPECT_EQ(a.hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(store.blob_count(), 1u);
  EXPECT_EQ(store.put(std::string_view("abc")), a);
  EXPECT_EQ(store.blob_count(), 1u);
  auto got = store.get(a);
  ASSERT_TRUE(std::holds_alternative<Bytes>(got));
  EXPECT_EQ(to_string(std::get<Bytes>(got)), "abc");
}

TEST(Cas, LayoutFansOutByFirstTwoBytes) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  auto a = store.put(std::string_view("abc"));
  EXPECT_EQ(store.blob_path(a), dir / "cas" / "blobs" / "ba" / "78" / a.hex());
  EXPECT_TRUE(fs::exists(store.blob_path(a)));
  EXPECT_EQ(store.tombstone_path(a), dir / "cas" / "tombstones" / "ba" / "78" / a.hex());
}

TEST(Cas, DistinctBlobsHaveDistinctAddresses) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  std::mt19937_64 rng(1);
  std::set<std::string> blobs;
  std::set<crypto::Digest> addrs;
  while (blobs.size() < 10000) {
    std::string b(1 + rng() % 24, '\0');
    for (auto& c : b) c = static_cast<char>(rng());
    if (blobs.insert(b).second) addrs.insert(store.put(b));
  }
  EXPECT_EQ(addrs.size(), blobs.size());
  EXPECT_EQ(store.blob_count(), blobs.size());
}

TEST(Cas, SizeLimits) {
  TempDir dir;
  cas::CasStore store(dir / "cas", 16);
  EXPECT_EQ(code_of([&] { store.put(std::string(17, 'x')); }), ErrorCode::BlobTooLarge);
  EXPECT_EQ(code_of([&] { store.put(std::string_view("")); }), ErrorCode::EmptyBlob);
  EXPECT_NO_THROW(store.put(std::string(16, 'x')));
  cas::CasStore big(dir / "big");
  EXPECT_EQ(big.max_blob_size(), 1024u * 1024u);
  EXPECT_EQ(code_of([&] { big.put(std::string(1024 * 1024 + 1, 'x')); }), ErrorCode::BlobTooLarge);
}

TEST(Cas, UnknownAddressIsNotFound) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  EXPECT_TRUE(std::holds_alternative<cas::NotFound>(store.get(crypto::hash("missing"))));
}

TEST(Cas, CorruptedFileIsIntegrityViolation) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  const std::string blob = "{\"answers\":{\"q1\":3}}";
  auto a = store.put(blob);
  for (std::size_t bit = 0; bit < blob.size() * 8; ++bit) {
    auto bad = blob;
    flip_bit(bad, bit);
    write_text(store.blob_path(a), bad);
    EXPECT_EQ(code_of([&] { store.get(a); }), ErrorCode::IntegrityViolation) << bit;
  }
}

TEST(Cas, MissingRootIsStoreUnavailable) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  auto a = store.put(std::string_view("x"));
  fs::remove_all(dir / "cas");
  EXPECT_EQ(code_of([&] { store.get(a); }), ErrorCode::StoreUnavailable);
}

TEST(Cas, EraseLeavesSignedTombstoneAndNoBytes) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  const std::string secret = "{\"answers\":{\"q1\":1},\"marker\":\"UNIQUE-RESPONSE-MARKER\"}";
  auto a = store.put(secret);
  auto respondent = seeded_key("respondent");
  auto admin = seeded_key("admin");
  auto request = cas::ErasureRequest::make(a, "gdpr-art17", respondent);
  auto tomb = store.erase(a, request, admin, 42);
  EXPECT_TRUE(tomb.signature_valid(admin.public_key));
  EXPECT_FALSE(tomb.signature_valid(respondent.public_key));
  EXPECT_EQ(tomb.erased_at, 42u);
  auto got = store.get(a);
  ASSERT_TRUE(std::holds_alternative<cas::Erased>(got));
  EXPECT_EQ(std::get<cas::Erased>(got).tombstone.digest(), tomb.digest());
  EXPECT_FALSE(fs::exists(store.blob_path(a)));
  EXPECT_EQ(all_bytes(dir.path()).find("UNIQUE-RESPONSE-MARKER"), std::string::npos);
  EXPECT_FALSE(store.contains(a));
  // Putting the same bytes again does not resurrect the blob.
  EXPECT_EQ(store.put(secret), a);
  EXPECT_TRUE(std::holds_alternative<cas::Erased>(store.get(a)));
  EXPECT_EQ(all_bytes(dir.path()).find("UNIQUE-RESPONSE-MARKER"), std::string::npos);
}

TEST(Cas, EraseErrors) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  auto admin = seeded_key("admin");
  auto who = seeded_key("who");
  auto missing = crypto::hash("missing");
  EXPECT_EQ(code_of([&] { store.erase(missing, cas::ErasureRequest::make(missing, "x", who), admin, 1); }),
            ErrorCode::NotFound);
  auto a = store.put(std::string_view("blob"));
  auto req = cas::ErasureRequest::make(a, "x", who);
  auto forged = req;
  forged.requester_signature.array()[3] ^= 1;
  EXPECT_EQ(code_of([&] { store.erase(a, forged, admin, 1); }), ErrorCode::InvalidSignature);
  auto other = cas::ErasureRequest::make(missing, "x", who);
  EXPECT_EQ(code_of([&] { store.erase(a, other, admin, 1); }), ErrorCode::InvalidSignature);
  store.erase(a, req, admin, 1);
  EXPECT_EQ(code_of([&] { store.erase(a, req, admin, 2); }), ErrorCode::AlreadyErased);
}

TEST(Cas, TombstoneDocumentRoundTrip) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  auto a = store.put(std::string_view("blob"));
  auto t = store.erase(a, cas::ErasureRequest::make(a, "gdpr-art17", seeded_key("r")), seeded_key("a"), 9);
  auto back = cas::Tombstone::from_document(t.to_document());
  EXPECT_EQ(back.digest(), t.digest());
  EXPECT_TRUE(back.signature_valid());
  auto tampered = back;
  tampered.erased_at = 10;
  EXPECT_FALSE(tampered.signature_valid());
}

TEST(Cas, ConcurrentPutsOfTheSameBlob) {
  TempDir dir;
  cas::CasStore store(dir / "cas");
  std::vector<std::thread> threads;
  std::vector<crypto::Digest> results(16);
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) results[t] = store.put("shared blob " + std::to_string(i));
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(store.blob_count(), 50u);
  for (const auto& a : store.list()) EXPECT_TRUE(std::holds_alternative<Bytes>(store.get(a)));
  EXPECT_TRUE(fs::is_empty(dir / "cas" / "tmp"));
}
