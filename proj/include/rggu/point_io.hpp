#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rggu/core.hpp"

namespace rggu {

// Text format: one point per line, comma-separated decimal coordinates.
// Lines starting with '#' before the first point are treated as a header.
// Blank lines are ignored. Numbers are parsed with from_chars, so the
// process locale never changes the decimal separator.

/// Throws Error(Parse) naming the offending line, or DimensionMismatch when
/// the row widths disagree with each other or with `expected_dim`.
PointCloud parse_points(std::string_view text, std::optional<std::size_t> expected_dim = {});

PointCloud read_points(const std::filesystem::path& path,
                       std::optional<std::size_t> expected_dim = {});

/// Shortest round-trip representation of each coordinate; `header` lines
/// are emitted with a "# " prefix.
std::string format_points(const PointCloud& cloud, std::string_view header = {});

void write_points(const std::filesystem::path& path, const PointCloud& cloud,
                  std::string_view header = {});

}  // namespace rggu
