#include "codewe/crypto/merkle.hpp"

#include <bit>

namespace codewe::crypto {

namespace {

std::size_t split_point(std::size_t n) {
  // Largest power of two strictly less than n (n >= 2).
  return std::bit_floor(n - 1);
}

Digest subtree_root(std::span<const Digest> leaves) {
  if (leaves.size() == 1) return merkle_leaf_hash(leaves[0]);
  std::size_t k = split_point(leaves.size());
  return merkle_node_hash(subtree_root(leaves.first(k)), subtree_root(leaves.subspan(k)));
}

void collect_path(std::span<const Digest> leaves, std::size_t index, std::vector<Digest>& out) {
  if (leaves.size() == 1) return;
  std::size_t k = split_point(leaves.size());
  if (index < k) {
    collect_path(leaves.first(k), index, out);
    out.push_back(subtree_root(leaves.subspan(k)));
  } else {
    collect_path(leaves.subspan(k), index - k, out);
    out.push_back(subtree_root(leaves.first(k)));
  }
}

}  // namespace

Digest merkle_leaf_hash(const Digest& leaf) {
  const std::uint8_t prefix = kLeafPrefix;
  return hash_concat({ByteView(&prefix, 1), leaf.view()});
}

Digest merkle_node_hash(const Digest& left, const Digest& right) {
  const std::uint8_t prefix = kNodePrefix;
  return hash_concat({ByteView(&prefix, 1), left.view(), right.view()});
}

Digest merkle_root(std::span<const Digest> leaves) {
  if (leaves.empty()) throw Error(ErrorCode::EmptyTree);
  return subtree_root(leaves);
}

MerkleProof merkle_prove(std::span<const Digest> leaves, std::uint64_t index) {
  if (leaves.empty()) throw Error(ErrorCode::EmptyTree);
  if (index >= leaves.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(index) + " of " + std::to_string(leaves.size()));
  }
  MerkleProof proof;
  proof.leaf_index = index;
  proof.tree_size = leaves.size();
  collect_path(leaves, static_cast<std::size_t>(index), proof.siblings);
  return proof;
}

bool merkle_verify(const Digest& root, const Digest& leaf, const MerkleProof& proof) noexcept {
  if (proof.leaf_index >= proof.tree_size) return false;
  std::uint64_t fn = proof.leaf_index;
  std::uint64_t sn = proof.tree_size - 1;
  Digest r = merkle_leaf_hash(leaf);
  for (const auto& sibling : proof.siblings) {
    if (sn == 0) return false;
    if ((fn & 1) != 0 || fn == sn) {
      r = merkle_node_hash(sibling, r);
      if ((fn & 1) == 0) {
        while ((fn & 1) == 0 && fn != 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      r = merkle_node_hash(r, sibling);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && r == root;
}

std::uint64_t merkle_path_length(std::uint64_t index, std::uint64_t tree_size) noexcept {
  if (index >= tree_size) return 0;
  std::uint64_t length = 0;
  std::uint64_t last = tree_size - 1;
  while (last != 0) {
    if ((index & 1) != 0 || index != last) ++length;
    index >>= 1;
    last >>= 1;
  }
  return length;
}

canonical::Document to_document(const MerkleProof& proof) {
  canonical::Document siblings = canonical::Document::array();
  for (const auto& s : proof.siblings) siblings.push_back(s.hex());
  return {{"leaf_index", proof.leaf_index}, {"tree_size", proof.tree_size}, {"siblings", siblings}};
}

MerkleProof merkle_proof_from_document(const canonical::Document& doc) {
  try {
    MerkleProof proof;
    proof.leaf_index = doc.at("leaf_index").get<std::uint64_t>();
    proof.tree_size = doc.at("tree_size").get<std::uint64_t>();
    for (const auto& s : doc.at("siblings")) proof.siblings.push_back(digest_from_hex(s.get<std::string>()));
    return proof;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::EncodingUnsupported, std::string("malformed proof: ") + e.what());
  }
}

}  // namespace codewe::crypto
