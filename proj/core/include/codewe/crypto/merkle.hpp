#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codewe/crypto/canonical.hpp"
#include "codewe/crypto/hash.hpp"

namespace codewe::crypto {

// Merkle tree over an ordered list of digests, in the RFC 6962 shape:
//   leaf node     = H(0x00 || leaf)
//   interior node = H(0x01 || left || right)
// A list of n > 1 leaves splits at k, the largest power of two with k < n.

inline constexpr std::uint8_t kLeafPrefix = 0x00;
inline constexpr std::uint8_t kNodePrefix = 0x01;

struct MerkleProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Digest> siblings;  // leaf to root

  friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

Digest merkle_leaf_hash(const Digest& leaf);
Digest merkle_node_hash(const Digest& left, const Digest& right);

/// Throws EmptyTree for an empty list.
Digest merkle_root(std::span<const Digest> leaves);

/// Throws EmptyTree or IndexOutOfRange.
MerkleProof merkle_prove(std::span<const Digest> leaves, std::uint64_t index);

/// Pure check; never throws.
bool merkle_verify(const Digest& root, const Digest& leaf, const MerkleProof& proof) noexcept;

/// Number of siblings an inclusion proof has for (index, size).
std::uint64_t merkle_path_length(std::uint64_t index, std::uint64_t tree_size) noexcept;

canonical::Document to_document(const MerkleProof& proof);
MerkleProof merkle_proof_from_document(const canonical::Document& doc);

}  // namespace codewe::crypto
