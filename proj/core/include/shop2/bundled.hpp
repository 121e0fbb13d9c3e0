#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace shop2 {

/// A domain or problem file compiled into the library.
struct BundledFile {
  std::string_view name;
  std::string_view text;
};

std::span<const BundledFile> bundledFiles();

inline std::optional<std::string_view> bundledFile(std::string_view name) {
  for (const auto& f : bundledFiles()) {
    if (f.name == name) return f.text;
  }
  return std::nullopt;
}

}  // namespace shop2
