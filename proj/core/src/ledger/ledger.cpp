#include "codewe/ledger/ledger.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "codewe/util/file_io.hpp"

namespace codewe::ledger {

namespace {

using Document = canonical::Document;

std::int64_t system_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint64_t get_be(std::string_view bytes, std::size_t offset, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 8) | static_cast<std::uint8_t>(bytes[offset + i]);
  return v;
}

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::SnapshotCorrupt, why); }

}  // namespace

Digest LedgerEntry::compute_digest() const {
  return canonical::digest({{"height", height},
                            {"prev_digest", prev_digest.hex()},
                            {"payload_digest", payload_digest.hex()},
                            {"logical_time", logical_time},
                            {"wall_clock", wall_clock}});
}

Document LedgerEntry::to_document() const {
  return {{"height", height},
          {"prev_digest", prev_digest.hex()},
          {"payload_digest", payload_digest.hex()},
          {"logical_time", logical_time},
          {"wall_clock", wall_clock},
          {"entry_digest", entry_digest.hex()}};
}

LedgerEntry LedgerEntry::from_document(const Document& doc) {
  LedgerEntry e;
  e.height = doc.at("height").get<std::uint64_t>();
  e.prev_digest = crypto::digest_from_hex(doc.at("prev_digest").get<std::string>());
  e.payload_digest = crypto::digest_from_hex(doc.at("payload_digest").get<std::string>());
  e.logical_time = doc.at("logical_time").get<std::uint64_t>();
  e.wall_clock = doc.at("wall_clock").get<std::int64_t>();
  e.entry_digest = crypto::digest_from_hex(doc.at("entry_digest").get<std::string>());
  return e;
}

ChainCheck verify_chain(std::span<const LedgerRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& e = records[i].entry;
    bool good = e.height == i;
    good = good && e.prev_digest == (i == 0 ? Digest{} : records[i - 1].entry.entry_digest);
    good = good && e.compute_digest() == e.entry_digest;
    good = good && (i == 0 || e.logical_time > records[i - 1].entry.logical_time);
    if (good) {
      try {
        good = e.payload_digest == records[i].tx.digest();
      } catch (const Error&) {
        good = false;
      }
    }
    if (!good) return {false, static_cast<std::uint64_t>(i)};
  }
  return {true, std::nullopt};
}

Ledger::Ledger() : Ledger(system_seconds) {}

Ledger::Ledger(WallClock wall_clock) : wall_clock_(std::move(wall_clock)) {}

Ledger::Ledger(Ledger&& other) noexcept {
  std::unique_lock lock(other.mutex_);
  wall_clock_ = std::move(other.wall_clock_);
  records_ = std::move(other.records_);
  registry_ = std::move(other.registry_);
  clock_floor_ = other.clock_floor_;
}

Ledger& Ledger::operator=(Ledger&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mutex_, other.mutex_);
    wall_clock_ = std::move(other.wall_clock_);
    records_ = std::move(other.records_);
    registry_ = std::move(other.registry_);
    clock_floor_ = other.clock_floor_;
  }
  return *this;
}

std::uint64_t Ledger::next_time_locked() const {
  std::uint64_t next = records_.empty() ? 0 : records_.back().entry.logical_time + 1;
  return std::max(next, clock_floor_);
}

TxReceipt Ledger::submit_tx(const Transaction& tx) {
  std::unique_lock lock(mutex_);
  if (!tx.signature_valid()) return TxReceipt::rejected(ErrorCode::InvalidSignature);

  LedgerEntry entry;
  entry.height = records_.size();
  entry.prev_digest = records_.empty() ? Digest{} : records_.back().entry.entry_digest;
  entry.payload_digest = tx.digest();
  entry.logical_time = next_time_locked();

  if (auto reason = registry_.apply(tx, entry.logical_time)) return TxReceipt::rejected(*reason);

  entry.wall_clock = wall_clock_ ? wall_clock_() : 0;
  entry.entry_digest = entry.compute_digest();
  records_.push_back({entry, tx});
  return {TxStatus::Accepted, std::nullopt, entry.height, entry.entry_digest};
}

ChainCheck Ledger::verify_chain() const {
  std::shared_lock lock(mutex_);
  return ledger::verify_chain(records_);
}

std::vector<LedgerRecord> Ledger::read_entries(const Digest& contract_id, std::optional<TxKind> kind) const {
  std::shared_lock lock(mutex_);
  std::vector<LedgerRecord> out;
  for (const auto& r : records_) {
    if (r.tx.contract_id == contract_id && (!kind || r.tx.kind == *kind)) out.push_back(r);
  }
  return out;
}

std::vector<LedgerRecord> Ledger::records() const {
  std::shared_lock lock(mutex_);
  return records_;
}

std::vector<Digest> Ledger::digest_sequence() const {
  std::shared_lock lock(mutex_);
  std::vector<Digest> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.entry.entry_digest);
  return out;
}

std::uint64_t Ledger::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::optional<contract::ContractState> Ledger::contract_state(const Digest& contract_id) const {
  std::shared_lock lock(mutex_);
  if (const auto* s = registry_.find(contract_id)) return *s;
  return std::nullopt;
}

Document Ledger::state_document() const {
  std::shared_lock lock(mutex_);
  return registry_.to_document();
}

std::uint64_t Ledger::next_logical_time() const {
  std::shared_lock lock(mutex_);
  return next_time_locked();
}

void Ledger::advance_clock_to(std::uint64_t t) {
  std::unique_lock lock(mutex_);
  clock_floor_ = std::max(clock_floor_, t);
}

void Ledger::snapshot_to_file(const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);  // blocks writers for the duration
  util::write_file_atomic(path, encode_snapshot(records_));
}

Ledger Ledger::restore_from_file(const std::filesystem::path& path) {
  auto contents = read_snapshot(path);
  if (!contents.footer_ok) corrupt("footer digest mismatch");
  if (contents.unparseable_record) corrupt("record " + std::to_string(*contents.unparseable_record) + " unparseable");
  return replay(contents.records);
}

Ledger Ledger::replay(std::span<const LedgerRecord> records) {
  std::int64_t wall = 0;
  Ledger ledger([&wall] { return wall; });
  for (const auto& record : records) {
    wall = record.entry.wall_clock;
    ledger.advance_clock_to(record.entry.logical_time);
    auto receipt = ledger.submit_tx(record.tx);
    if (!receipt.accepted()) {
      corrupt("transaction at height " + std::to_string(record.entry.height) + " rejected on replay: " +
              std::string(codewe::to_string(*receipt.reason)));
    }
    if (ledger.records_.back().entry != record.entry) {
      corrupt("entry mismatch at height " + std::to_string(record.entry.height));
    }
  }
  ledger.wall_clock_ = system_seconds;
  return ledger;
}

std::string encode_snapshot(std::span<const LedgerRecord> records) {
  std::string out(kSnapshotMagic, sizeof(kSnapshotMagic));
  put_u32(out, kSnapshotVersion);
  put_u64(out, records.size());
  for (const auto& r : records) {
    std::string body = canonical::encode({{"entry", r.entry.to_document()}, {"tx", r.tx.to_document()}});
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    out += body;
  }
  auto footer = crypto::hash(out);
  out.append(reinterpret_cast<const char*>(footer.data()), footer.size());
  return out;
}

SnapshotContents decode_snapshot(std::string_view bytes) {
  constexpr std::size_t kHeader = sizeof(kSnapshotMagic) + 4 + 8;
  constexpr std::size_t kFooter = 32;
  if (bytes.size() < kHeader + kFooter) corrupt("file too short");
  if (std::memcmp(bytes.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0) corrupt("bad magic");
  if (get_be(bytes, 8, 4) != kSnapshotVersion) corrupt("unsupported version");

  SnapshotContents out;
  std::string_view covered = bytes.substr(0, bytes.size() - kFooter);
  auto footer = Digest::from_span(as_bytes(bytes.substr(bytes.size() - kFooter)), ErrorCode::SnapshotCorrupt);
  out.footer_ok = crypto::hash(covered) == footer;

  std::uint64_t count = get_be(bytes, 12, 8);
  std::size_t offset = kHeader;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (offset + 4 > covered.size()) corrupt("truncated record header");
    std::size_t len = get_be(covered, offset, 4);
    offset += 4;
    if (offset + len > covered.size()) corrupt("truncated record body");
    if (!out.unparseable_record) {
      try {
        auto doc = canonical::decode(covered.substr(offset, len));
        out.records.push_back({LedgerEntry::from_document(doc.at("entry")), Transaction::from_document(doc.at("tx"))});
      } catch (const Error&) {
        out.unparseable_record = i;
      } catch (const nlohmann::json::exception&) {
        out.unparseable_record = i;
      }
    }
    offset += len;
  }
  if (offset != covered.size()) corrupt("trailing bytes before footer");
  return out;
}

SnapshotContents read_snapshot(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = util::read_file(path);
  } catch (const std::exception& e) {
    corrupt(e.what());
  }
  return decode_snapshot(bytes);
}

}  // namespace codewe::ledger
