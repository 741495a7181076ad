#include "codewe/analysis/score.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace codewe::analysis {

using Document = canonical::Document;

namespace {

__extension__ typedef unsigned __int128 u128;

std::string na() { return "n/a"; }

}  // namespace

std::string render_ratio(std::int64_t num, std::int64_t den, int places) {
  if (den <= 0) throw std::invalid_argument("render_ratio: denominator must be positive");
  const bool negative = num < 0;
  // Magnitude without overflowing on INT64_MIN.
  const u128 magnitude = negative ? static_cast<u128>(-(num + 1)) + 1 : static_cast<u128>(num);
  u128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const u128 scaled = magnitude * scale;
  u128 q = scaled / static_cast<u128>(den);
  const u128 r = scaled % static_cast<u128>(den);
  const u128 twice = 2 * r;
  if (twice > static_cast<u128>(den) || (twice == static_cast<u128>(den) && (q & 1) != 0)) ++q;

  auto whole = static_cast<std::uint64_t>(q / scale);
  auto frac = static_cast<std::uint64_t>(q % scale);
  std::string out = (negative && q != 0) ? "-" : "";
  out += std::to_string(whole);
  if (places > 0) {
    std::string f = std::to_string(frac);
    out += '.';
    out.append(static_cast<std::size_t>(places) - f.size(), '0');
    out += f;
  }
  return out;
}

std::int64_t scored_value(const contract::LikertScale& scale, bool reverse_scored, std::int64_t v) noexcept {
  return reverse_scored ? scale.min + scale.max - v : v;
}

std::int64_t lower_median(std::vector<std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("lower_median: empty input");
  const auto mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

Document ItemStats::to_document() const {
  Document dist = Document::array();
  for (const auto& vc : distribution) dist.push_back({{"value", vc.value}, {"count", vc.count}});
  Document doc = {{"item_id", item_id}, {"dimension", dimension}, {"reverse_scored", reverse_scored},
                  {"n", n},             {"sum", sum},             {"mean", mean},
                  {"distribution", dist}};
  if (median) doc["median"] = *median;
  return doc;
}

Document DimensionStats::to_document() const {
  return {{"dimension", dimension}, {"item_count", item_count}, {"n", n}, {"sum", sum}, {"mean", mean}};
}

Document TotalStats::to_document() const {
  Document doc = {{"n", n}, {"sum", sum}, {"mean", mean}, {"empty", n == 0}};
  if (median) doc["median"] = *median;
  if (min) doc["min"] = *min;
  if (max) doc["max"] = *max;
  return doc;
}

Statistics score(const std::vector<std::map<std::string, std::int64_t>>& responses,
                 const contract::SurveyParameters& params) {
  Statistics out;
  std::map<std::string, DimensionStats> dims;
  std::vector<std::int64_t> totals(responses.size(), 0);

  for (const auto& item : params.items) {
    const auto& scale = params.scale_of(item);
    ItemStats s;
    s.item_id = item.item_id;
    s.dimension = item.dimension;
    s.reverse_scored = item.reverse_scored;
    std::map<std::int64_t, std::uint64_t> counts;
    for (auto v = scale.min; v <= scale.max; ++v) counts[v] = 0;
    std::vector<std::int64_t> values;
    values.reserve(responses.size());
    for (std::size_t r = 0; r < responses.size(); ++r) {
      const auto v = scored_value(scale, item.reverse_scored, responses[r].at(item.item_id));
      values.push_back(v);
      ++counts[v];
      s.sum += v;
      totals[r] += v;
    }
    s.n = values.size();
    s.mean = s.n == 0 ? na() : render_ratio(s.sum, static_cast<std::int64_t>(s.n));
    if (s.n > 0) s.median = lower_median(values);
    for (const auto& [value, count] : counts) s.distribution.push_back({value, count});

    auto& d = dims[item.dimension];
    d.dimension = item.dimension;
    d.item_count += 1;
    d.n += s.n;
    d.sum += s.sum;
    out.items.push_back(std::move(s));
  }

  for (auto& [name, d] : dims) {
    d.mean = d.n == 0 ? na() : render_ratio(d.sum, static_cast<std::int64_t>(d.n));
    out.dimensions.push_back(std::move(d));
  }

  auto& t = out.total;
  t.n = totals.size();
  for (auto v : totals) t.sum += v;
  t.mean = t.n == 0 ? na() : render_ratio(t.sum, static_cast<std::int64_t>(t.n));
  if (t.n > 0) {
    t.median = lower_median(totals);
    t.min = *std::min_element(totals.begin(), totals.end());
    t.max = *std::max_element(totals.begin(), totals.end());
  }
  return out;
}

Statistics score(const QueryStore& store, const contract::SurveyParameters& params) {
  std::map<Digest, std::map<std::string, std::int64_t>> by_response;
  for (const auto& row : store.rows(params.survey_id)) by_response[row.response_digest][row.item_id] = row.value;
  std::vector<std::map<std::string, std::int64_t>> responses;
  responses.reserve(by_response.size());
  for (auto& [digest, answers] : by_response) responses.push_back(std::move(answers));
  return score(responses, params);
}

}  // namespace codewe::analysis
