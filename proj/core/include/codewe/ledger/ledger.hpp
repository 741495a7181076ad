#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "codewe/contract/state.hpp"
#include "codewe/ledger/transaction.hpp"

namespace codewe::ledger {

struct LedgerEntry {
  std::uint64_t height = 0;
  Digest prev_digest;  // zero at height 0
  Digest payload_digest;
  std::uint64_t logical_time = 0;
  std::int64_t wall_clock = 0;  // informational only
  Digest entry_digest;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;

  /// Digest over the canonical encoding of every field except entry_digest.
  Digest compute_digest() const;

  canonical::Document to_document() const;
  static LedgerEntry from_document(const canonical::Document& doc);
};

struct LedgerRecord {
  LedgerEntry entry;
  Transaction tx;

  friend bool operator==(const LedgerRecord&, const LedgerRecord&) = default;
};

struct ChainCheck {
  bool ok = true;
  std::optional<std::uint64_t> first_bad_height;
};

/// Checks heights, digest links, entry digests, payload digests and that
/// logical time strictly increases. The reported height is the record's
/// position in `records`.
ChainCheck verify_chain(std::span<const LedgerRecord> records);

/// Append-only, hash-chained log of transactions with the contract registry
/// as its derived state. Appends are serialised; reads take a shared lock and
/// see a consistent prefix.
class Ledger {
 public:
  using WallClock = std::function<std::int64_t()>;

  Ledger();
  explicit Ledger(WallClock wall_clock);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  Ledger(Ledger&&) noexcept;
  Ledger& operator=(Ledger&&) noexcept;

  /// Validates and, if accepted, appends one entry. Rejections leave the
  /// ledger untouched.
  TxReceipt submit_tx(const Transaction& tx);

  ChainCheck verify_chain() const;

  std::vector<LedgerRecord> read_entries(const Digest& contract_id, std::optional<TxKind> kind = std::nullopt) const;
  std::vector<LedgerRecord> records() const;
  std::vector<Digest> digest_sequence() const;
  std::uint64_t size() const;

  std::optional<contract::ContractState> contract_state(const Digest& contract_id) const;
  canonical::Document state_document() const;

  /// Logical time the next accepted entry will carry.
  std::uint64_t next_logical_time() const;
  /// Moves the logical clock forward; the next entry gets at least `t`.
  void advance_clock_to(std::uint64_t t);

  /// Writes the snapshot file atomically (temp file + rename).
  void snapshot_to_file(const std::filesystem::path& path) const;

  /// Throws SnapshotCorrupt if the footer, framing or replay does not check out.
  static Ledger restore_from_file(const std::filesystem::path& path);

  /// Re-executes every transaction from genesis with the recorded times and
  /// checks each produced entry against the recorded one. Throws
  /// SnapshotCorrupt on the first divergence.
  static Ledger replay(std::span<const LedgerRecord> records);

 private:
  std::uint64_t next_time_locked() const;

  mutable std::shared_mutex mutex_;
  WallClock wall_clock_;
  std::vector<LedgerRecord> records_;
  contract::ContractRegistry registry_;
  std::uint64_t clock_floor_ = 0;
};

// Snapshot file layout (big-endian integers):
//   magic "CDWLDGR1" | u32 version | u64 record count
//   record count x (u32 length | canonical {"entry":..,"tx":..})
//   32-byte SHA-256 of everything before the footer
inline constexpr char kSnapshotMagic[8] = {'C', 'D', 'W', 'L', 'D', 'G', 'R', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::string encode_snapshot(std::span<const LedgerRecord> records);

struct SnapshotContents {
  std::vector<LedgerRecord> records;
  bool footer_ok = false;
  // Index of the first record whose framing is intact but whose content does
  // not parse; `records` stops just before it.
  std::optional<std::uint64_t> unparseable_record;
};

/// Parses the framing without trusting the footer, so a verifier can still
/// locate the first bad height in a tampered file. Throws SnapshotCorrupt if
/// the framing itself is unreadable.
SnapshotContents read_snapshot(const std::filesystem::path& path);
SnapshotContents decode_snapshot(std::string_view bytes);

}  // namespace codewe::ledger
