#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codewe/analysis/query_store.hpp"
#include "codewe/contract/survey.hpp"

namespace codewe::analysis {

/// Renders num/den rounded half-even to `places` decimals, e.g. "4.0000".
/// den must be positive.
std::string render_ratio(std::int64_t num, std::int64_t den, int places = 4);

/// min + max - v for reverse-scored items, v otherwise.
std::int64_t scored_value(const contract::LikertScale& scale, bool reverse_scored, std::int64_t v) noexcept;

/// Lower-middle element for even n. Input need not be sorted.
std::int64_t lower_median(std::vector<std::int64_t> values);

struct ValueCount {
  std::int64_t value = 0;
  std::uint64_t count = 0;

  friend bool operator==(const ValueCount&, const ValueCount&) = default;
};

struct ItemStats {
  std::string item_id;
  std::string dimension;
  bool reverse_scored = false;
  std::uint64_t n = 0;
  std::int64_t sum = 0;           // of scored values
  std::string mean;               // "n/a" when n == 0
  std::optional<std::int64_t> median;
  std::vector<ValueCount> distribution;  // every scale point, ascending, scored values

  friend bool operator==(const ItemStats&, const ItemStats&) = default;
  canonical::Document to_document() const;
};

struct DimensionStats {
  std::string dimension;
  std::uint64_t item_count = 0;
  std::uint64_t n = 0;  // pooled value count
  std::int64_t sum = 0;
  std::string mean;

  friend bool operator==(const DimensionStats&, const DimensionStats&) = default;
  canonical::Document to_document() const;
};

/// Per-respondent totals (sum of scored values over all items).
struct TotalStats {
  std::uint64_t n = 0;
  std::int64_t sum = 0;
  std::string mean;
  std::optional<std::int64_t> median;
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;

  friend bool operator==(const TotalStats&, const TotalStats&) = default;
  canonical::Document to_document() const;
};

struct Statistics {
  std::vector<ItemStats> items;  // survey item order
  std::vector<DimensionStats> dimensions;  // sorted by name
  TotalStats total;

  bool empty() const noexcept { return total.n == 0; }
  friend bool operator==(const Statistics&, const Statistics&) = default;
};

/// Scores every response held in `store` for this survey.
Statistics score(const QueryStore& store, const contract::SurveyParameters& params);

/// Same computation over raw answer maps, for callers without a store.
Statistics score(const std::vector<std::map<std::string, std::int64_t>>& responses,
                 const contract::SurveyParameters& params);

}  // namespace codewe::analysis
