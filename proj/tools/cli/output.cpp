#include "output.hpp"

#include <ostream>

namespace codewe::cli {

void emit(std::ostream& out, const canonical::Document& doc, Format format) {
  if (format == Format::Json || !doc.is_object()) {
    out << canonical::encode(doc) << "\n";
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    out << key << ": ";
    if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << canonical::encode(value);
    }
    out << "\n";
  }
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig: return kExitConfig;
    case ErrorCode::StoreUnavailable:
    case ErrorCode::SnapshotCorrupt: return kExitIo;
    default: return kExitRejected;
  }
}

}  // namespace codewe::cli
