#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace codewe::util {

/// Throws std::runtime_error if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`. Creates parent
/// directories. `owner_only` restricts permissions to 0600.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes, bool owner_only = false);

}  // namespace codewe::util
