#include "codewe/analysis/plots.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "codewe/error.hpp"
#include "codewe/util/file_io.hpp"

namespace codewe::analysis {

using Document = canonical::Document;

namespace {

constexpr int kWidth = 480;
constexpr int kHeight = 240;
constexpr int kLeft = 40;
constexpr int kRight = 16;
constexpr int kTop = 32;
constexpr int kBottom = 40;
constexpr int kPlotW = kWidth - kLeft - kRight;
constexpr int kPlotH = kHeight - kTop - kBottom;

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string safe_name(std::string_view id) {
  std::string out;
  for (unsigned char c : id) {
    out += (std::isalnum(c) != 0 || c == '-' || c == '_') ? static_cast<char>(c) : '_';
  }
  return out.empty() ? "item" : out;
}

std::string header(std::string_view title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
                  std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
                  std::to_string(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
       "\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"" + std::to_string(kLeft) + "\" y=\"18\" font-size=\"13\">" + xml_escape(title) + "</text>\n";
  s += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + std::to_string(kTop + kPlotH) + "\" x2=\"" +
       std::to_string(kLeft + kPlotW) + "\" y2=\"" + std::to_string(kTop + kPlotH) + "\" stroke=\"#333333\"/>\n";
  return s;
}

std::string empty_state() {
  return "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(kTop + kPlotH / 2) +
         "\" text-anchor=\"middle\" fill=\"#777777\">No responses analysed</text>\n";
}

struct Bar {
  std::string label;
  std::string value_label;
  std::int64_t magnitude = 0;  // drawn height is proportional, clamped at 0
};

std::string bars(const std::vector<Bar>& data) {
  std::int64_t peak = 0;
  for (const auto& b : data) peak = std::max(peak, b.magnitude);
  const int n = static_cast<int>(data.size());
  const int slot = n == 0 ? kPlotW : kPlotW / n;
  const int width = std::max(1, slot * 3 / 4);
  std::string s;
  for (int i = 0; i < n; ++i) {
    const auto& b = data[static_cast<std::size_t>(i)];
    const std::int64_t mag = std::max<std::int64_t>(0, b.magnitude);
    const int h = peak == 0 ? 0 : static_cast<int>(mag * kPlotH / peak);
    const int x = kLeft + i * slot + (slot - width) / 2;
    const int y = kTop + kPlotH - h;
    s += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(h) + "\" fill=\"#4a78a8\"/>\n";
    const int cx = x + width / 2;
    s += "<text x=\"" + std::to_string(cx) + "\" y=\"" + std::to_string(y - 4) + "\" text-anchor=\"middle\">" +
         xml_escape(b.value_label) + "</text>\n";
    s += "<text x=\"" + std::to_string(cx) + "\" y=\"" + std::to_string(kTop + kPlotH + 16) +
         "\" text-anchor=\"middle\">" + xml_escape(b.label) + "</text>\n";
  }
  return s;
}

std::string pad2(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

}  // namespace

std::optional<std::int64_t> parse_fixed4(std::string_view text) {
  bool negative = !text.empty() && text.front() == '-';
  if (negative) text.remove_prefix(1);
  auto dot = text.find('.');
  if (dot == std::string_view::npos || text.size() - dot - 1 != 4) return std::nullopt;
  std::int64_t whole = 0, frac = 0;
  auto w = text.substr(0, dot), f = text.substr(dot + 1);
  if (std::from_chars(w.data(), w.data() + w.size(), whole).ec != std::errc{}) return std::nullopt;
  if (std::from_chars(f.data(), f.data() + f.size(), frac).ec != std::errc{}) return std::nullopt;
  const auto v = whole * 10000 + frac;
  return negative ? -v : v;
}

std::vector<PlotFile> export_plots(const Document& body) {
  std::vector<PlotFile> out;
  try {
    const bool empty = body.at("total").at("n").get<std::uint64_t>() == 0;
    const auto& items = body.at("items");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& item = items[i];
      const auto id = item.at("item_id").get<std::string>();
      std::string svg = header("Item " + id + " (n=" + std::to_string(item.at("n").get<std::uint64_t>()) +
                               ", mean " + item.at("mean").get<std::string>() + ")");
      if (empty) {
        svg += empty_state();
      } else {
        std::vector<Bar> data;
        for (const auto& vc : item.at("distribution")) {
          const auto count = vc.at("count").get<std::int64_t>();
          data.push_back({std::to_string(vc.at("value").get<std::int64_t>()), std::to_string(count), count});
        }
        svg += bars(data);
      }
      svg += "</svg>\n";
      out.push_back({"item_" + pad2(i + 1) + "_" + safe_name(id) + ".svg", std::move(svg)});
    }

    std::string svg = header("Dimension means");
    if (empty) {
      svg += empty_state();
    } else {
      std::vector<Bar> data;
      for (const auto& d : body.at("dimensions")) {
        const auto mean = d.at("mean").get<std::string>();
        data.push_back({d.at("dimension").get<std::string>(), mean, parse_fixed4(mean).value_or(0)});
      }
      svg += bars(data);
    }
    svg += "</svg>\n";
    out.push_back({"dimensions.svg", std::move(svg)});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ReportUnavailable, e.what());
  }
  return out;
}

void write_plots(const std::filesystem::path& dir, const std::vector<PlotFile>& plots) {
  for (const auto& p : plots) util::write_file_atomic(dir / p.name, p.svg);
}

}  // namespace codewe::analysis
