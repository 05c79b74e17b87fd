#include "rggu/point_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace rggu {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

PointCloud parse_points(std::string_view text, std::optional<std::size_t> expected_dim) {
  std::vector<double> coords;
  std::size_t dim = expected_dim.value_or(0);
  bool seen_point = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (line.empty()) continue;
    if (line.front() == '#') {
      if (seen_point) parse_error(line_no, "comment lines are only allowed before the data");
      continue;
    }

    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      std::string_view field = trim(line.substr(0, comma));
      if (field.empty()) parse_error(line_no, "empty field");
      // from_chars rejects a leading '+', which some writers emit.
      if (field.front() == '+') field.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        parse_error(line_no, "cannot parse '" + std::string(field) + "' as a number");
      }
      if (!std::isfinite(value)) parse_error(line_no, "non-finite coordinate");
      coords.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }

    if (dim == 0) dim = fields;
    if (fields != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " coordinates, found " + std::to_string(fields));
    }
    seen_point = true;
  }

  if (!seen_point) {
    return PointCloud(dim == 0 ? 1 : dim, {});
  }
  return PointCloud(dim, std::move(coords));
}

PointCloud read_points(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_points(buffer.str(), expected_dim);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_points(const PointCloud& cloud, std::string_view header) {
  std::string out;
  while (!header.empty()) {
    const auto eol = header.find('\n');
    out += "# ";
    out += header.substr(0, eol);
    out += '\n';
    header = eol == std::string_view::npos ? std::string_view{} : header.substr(eol + 1);
  }
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) {
      if (j) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, cloud.coord(i, j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

void write_points(const std::filesystem::path& path, const PointCloud& cloud,
                  std::string_view header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << format_points(cloud, header);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace rggu
