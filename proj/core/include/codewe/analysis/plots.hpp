#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codewe/crypto/canonical.hpp"

namespace codewe::analysis {

struct PlotFile {
  std::string name;  // file name, no directory
  std::string svg;
};

/// Static SVG charts for a report body: one per-item distribution chart
/// (item_<NN>_<id>.svg, NN = position in the survey) and dimensions.svg with
/// the per-dimension means. Integer geometry only, so output is byte-stable.
/// A report with no included responses yields the same files drawn in an
/// empty state.
std::vector<PlotFile> export_plots(const canonical::Document& report_body);

void write_plots(const std::filesystem::path& dir, const std::vector<PlotFile>& plots);

/// "3.2500" -> 32500; "n/a" -> nullopt. Ten-thousandths.
std::optional<std::int64_t> parse_fixed4(std::string_view text);

}  // namespace codewe::analysis
