#include "rggu/result_table.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rggu/core.hpp"

namespace rggu {

namespace {

constexpr const char* kHeader = "model,variant,beta,d,n,k,value,se,reps,seed,level";

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

template <class T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::Parse, "table line " + std::to_string(line_no) + ": bad number '" +
                                      std::string(field) + "'");
  }
  return value;
}

double parse_real(std::string_view field, std::size_t line_no) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  return parse_number<double>(field, line_no);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool ResultRow::same_cell(const ResultRow& o) const noexcept {
  return model == o.model && variant == o.variant && close(beta, o.beta) && d == o.d &&
         n == o.n && close(k, o.k) && close(level, o.level);
}

const ResultRow* ResultTable::find(const ResultRow& key) const noexcept {
  for (const auto& row : rows_) {
    if (row.same_cell(key)) return &row;
  }
  return nullptr;
}

const ResultRow* ResultTable::find_critical(const std::string& variant, double beta, int d,
                                            std::size_t n, double k,
                                            double level) const noexcept {
  for (const auto& row : rows_) {
    if (row.variant == variant && close(row.beta, beta) && row.d == d && row.n == n &&
        close(row.k, k) && close(row.level, level)) {
      return &row;
    }
  }
  return nullptr;
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (const auto& [key, value] : metadata_) out += "# " + key + ": " + value + "\n";
  out += kHeader;
  out += '\n';
  for (const auto& r : rows_) {
    out += r.model + ',' + r.variant + ',' + format_double(r.beta) + ',' + std::to_string(r.d) +
           ',' + std::to_string(r.n) + ',' + format_double(r.k) + ',' + format_double(r.value) +
           ',' + format_double(r.se) + ',' + std::to_string(r.reps) + ',' +
           std::to_string(r.seed) + ',' + format_double(r.level) + '\n';
  }
  return out;
}

ResultTable ResultTable::from_csv(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos && line.size() > 2) {
        std::string key = line.substr(2, colon - 2);
        std::string value = colon + 2 <= line.size() ? line.substr(colon + 2) : std::string{};
        table.metadata_[key] = value;
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) {
        throw Error(ErrorCode::Parse, "table line " + std::to_string(line_no) +
                                          ": unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (f.size() != 11) {
      throw Error(ErrorCode::Parse,
                  "table line " + std::to_string(line_no) + ": expected 11 fields");
    }
    ResultRow r;
    r.model = std::string(f[0]);
    r.variant = std::string(f[1]);
    r.beta = parse_real(f[2], line_no);
    r.d = parse_number<int>(f[3], line_no);
    r.n = parse_number<std::size_t>(f[4], line_no);
    r.k = parse_real(f[5], line_no);
    r.value = parse_real(f[6], line_no);
    r.se = parse_real(f[7], line_no);
    r.reps = parse_number<std::size_t>(f[8], line_no);
    r.seed = parse_number<std::uint64_t>(f[9], line_no);
    r.level = parse_real(f[10], line_no);
    table.rows_.push_back(std::move(r));
  }
  return table;
}

std::string ResultTable::to_json() const {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metadata_) j["metadata"][key] = value;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    nlohmann::ordered_json row;
    row["model"] = r.model;
    row["variant"] = r.variant;
    row["beta"] = r.beta;
    row["d"] = r.d;
    row["n"] = r.n;
    row["k"] = r.k;
    row["value"] = r.value;
    row["se"] = r.se;
    row["reps"] = r.reps;
    row["seed"] = r.seed;
    row["level"] = r.level;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

ResultTable ResultTable::from_json(const std::string& text) {
  ResultTable table;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.at("metadata").items()) {
      table.metadata_[key] = value.get<std::string>();
    }
    for (const auto& row : j.at("rows")) {
      ResultRow r;
      r.model = row.at("model").get<std::string>();
      r.variant = row.at("variant").get<std::string>();
      r.beta = row.at("beta").get<double>();
      r.d = row.at("d").get<int>();
      r.n = row.at("n").get<std::size_t>();
      r.k = row.at("k").get<double>();
      r.value = row.at("value").is_null() ? std::nan("") : row.at("value").get<double>();
      r.se = row.at("se").is_null() ? std::nan("") : row.at("se").get<double>();
      r.reps = row.at("reps").get<std::size_t>();
      r.seed = row.at("seed").get<std::uint64_t>();
      r.level = row.at("level").get<double>();
      table.rows_.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed table JSON: ") + e.what());
  }
  return table;
}

void ResultTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << (path.extension() == ".json" ? to_json() : to_csv());
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

ResultTable ResultTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return path.extension() == ".json" ? from_json(buffer.str()) : from_csv(buffer.str());
}

}  // namespace rggu
