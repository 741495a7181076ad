#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "codewe/analysis/response_set.hpp"

struct sqlite3;

namespace codewe::analysis {

struct QueryRow {
  Digest response_digest;
  std::string item_id;
  std::int64_t value = 0;  // raw answer, not reverse-folded
  std::string dimension;
  std::uint64_t logical_time = 0;

  friend bool operator==(const QueryRow&, const QueryRow&) = default;
};

/// Relational cache of included responses, one row per (response, item),
/// indexed by survey and item. Backed by SQLite; in-memory unless a file path
/// is given. Rebuildable from ledger + CAS, so never a source of truth.
class QueryStore {
 public:
  explicit QueryStore(const std::string& path = ":memory:");
  ~QueryStore();
  QueryStore(QueryStore&&) noexcept;
  QueryStore& operator=(QueryStore&&) noexcept;

  void insert_response(const Digest& response_digest, std::uint64_t logical_time,
                       const contract::SurveyParameters& params, const ResponseSet& response);

  /// Values for one item, in ledger order.
  std::vector<std::int64_t> item_values(const Digest& survey_id, std::string_view item_id) const;

  /// All rows for a survey, ordered by (logical_time, response_digest, item_id).
  std::vector<QueryRow> rows(const Digest& survey_id) const;

  std::uint64_t row_count(const Digest& survey_id) const;
  std::uint64_t response_count(const Digest& survey_id) const;

 private:
  struct Closer {
    void operator()(sqlite3* db) const noexcept;
  };
  void exec(const char* sql) const;

  std::unique_ptr<sqlite3, Closer> db_;
};

}  // namespace codewe::analysis
