#include "codewe/analysis/query_store.hpp"

#include <sqlite3.h>

#include <stdexcept>

namespace codewe::analysis {

namespace {

struct StatementFinalizer {
  void operator()(sqlite3_stmt* s) const noexcept { sqlite3_finalize(s); }
};
using Statement = std::unique_ptr<sqlite3_stmt, StatementFinalizer>;

Statement prepare(sqlite3* db, const char* sql) {
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(db, sql, -1, &raw, nullptr) != SQLITE_OK) {
    throw Error(ErrorCode::StoreUnavailable, std::string("query store: ") + sqlite3_errmsg(db));
  }
  return Statement(raw);
}

void bind_text(sqlite3_stmt* s, int index, const std::string& text) {
  sqlite3_bind_text(s, index, text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
}

std::string column_text(sqlite3_stmt* s, int index) {
  const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(s, index));
  return p == nullptr ? std::string() : std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(s, index)));
}

}  // namespace

void QueryStore::Closer::operator()(sqlite3* db) const noexcept { sqlite3_close(db); }

QueryStore::QueryStore(const std::string& path) {
  sqlite3* raw = nullptr;
  if (sqlite3_open(path.c_str(), &raw) != SQLITE_OK) {
    std::string msg = raw != nullptr ? sqlite3_errmsg(raw) : "out of memory";
    sqlite3_close(raw);
    throw Error(ErrorCode::StoreUnavailable, "query store: " + msg);
  }
  db_.reset(raw);
  exec(
      "CREATE TABLE IF NOT EXISTS response_rows ("
      "  survey_id TEXT NOT NULL,"
      "  response_digest TEXT NOT NULL,"
      "  item_id TEXT NOT NULL,"
      "  value INTEGER NOT NULL,"
      "  dimension TEXT NOT NULL,"
      "  logical_time INTEGER NOT NULL,"
      "  PRIMARY KEY (survey_id, response_digest, item_id));"
      "CREATE INDEX IF NOT EXISTS rows_by_item ON response_rows (survey_id, item_id, logical_time);");
}

QueryStore::~QueryStore() = default;
QueryStore::QueryStore(QueryStore&&) noexcept = default;
QueryStore& QueryStore::operator=(QueryStore&&) noexcept = default;

void QueryStore::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_.get(), sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err != nullptr ? err : "unknown";
    sqlite3_free(err);
    throw Error(ErrorCode::StoreUnavailable, "query store: " + msg);
  }
}

void QueryStore::insert_response(const Digest& response_digest, std::uint64_t logical_time,
                                 const contract::SurveyParameters& params, const ResponseSet& response) {
  auto stmt = prepare(db_.get(),
                      "INSERT INTO response_rows (survey_id, response_digest, item_id, value, dimension, logical_time)"
                      " VALUES (?1, ?2, ?3, ?4, ?5, ?6)");
  const auto survey = params.survey_id.hex();
  const auto digest = response_digest.hex();
  exec("BEGIN");
  try {
    for (const auto& item : params.items) {
      sqlite3_reset(stmt.get());
      bind_text(stmt.get(), 1, survey);
      bind_text(stmt.get(), 2, digest);
      bind_text(stmt.get(), 3, item.item_id);
      sqlite3_bind_int64(stmt.get(), 4, response.answers.at(item.item_id));
      bind_text(stmt.get(), 5, item.dimension);
      sqlite3_bind_int64(stmt.get(), 6, static_cast<sqlite3_int64>(logical_time));
      if (sqlite3_step(stmt.get()) != SQLITE_DONE) {
        throw Error(ErrorCode::StoreUnavailable, std::string("query store: ") + sqlite3_errmsg(db_.get()));
      }
    }
    exec("COMMIT");
  } catch (...) {
    exec("ROLLBACK");
    throw;
  }
}

std::vector<std::int64_t> QueryStore::item_values(const Digest& survey_id, std::string_view item_id) const {
  auto stmt = prepare(db_.get(),
                      "SELECT value FROM response_rows WHERE survey_id = ?1 AND item_id = ?2"
                      " ORDER BY logical_time, response_digest");
  bind_text(stmt.get(), 1, survey_id.hex());
  bind_text(stmt.get(), 2, std::string(item_id));
  std::vector<std::int64_t> out;
  while (sqlite3_step(stmt.get()) == SQLITE_ROW) out.push_back(sqlite3_column_int64(stmt.get(), 0));
  return out;
}

std::vector<QueryRow> QueryStore::rows(const Digest& survey_id) const {
  auto stmt = prepare(db_.get(),
                      "SELECT response_digest, item_id, value, dimension, logical_time FROM response_rows"
                      " WHERE survey_id = ?1 ORDER BY logical_time, response_digest, item_id");
  bind_text(stmt.get(), 1, survey_id.hex());
  std::vector<QueryRow> out;
  while (sqlite3_step(stmt.get()) == SQLITE_ROW) {
    QueryRow row;
    row.response_digest = crypto::digest_from_hex(column_text(stmt.get(), 0));
    row.item_id = column_text(stmt.get(), 1);
    row.value = sqlite3_column_int64(stmt.get(), 2);
    row.dimension = column_text(stmt.get(), 3);
    row.logical_time = static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 4));
    out.push_back(std::move(row));
  }
  return out;
}

std::uint64_t QueryStore::row_count(const Digest& survey_id) const {
  auto stmt = prepare(db_.get(), "SELECT COUNT(*) FROM response_rows WHERE survey_id = ?1");
  bind_text(stmt.get(), 1, survey_id.hex());
  sqlite3_step(stmt.get());
  return static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 0));
}

std::uint64_t QueryStore::response_count(const Digest& survey_id) const {
  auto stmt = prepare(db_.get(), "SELECT COUNT(DISTINCT response_digest) FROM response_rows WHERE survey_id = ?1");
  bind_text(stmt.get(), 1, survey_id.hex());
  sqlite3_step(stmt.get());
  return static_cast<std::uint64_t>(sqlite3_column_int64(stmt.get(), 0));
}

}  // namespace codewe::analysis
