#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rggu {

/// One cell of a simulation table. For BR tables `variant` is "br" and the
/// `k` column holds the bandwidth h. `level` is the quantile level for
/// critical values and the significance level for rejection rates.
struct ResultRow {
  std::string model = "h0";
  std::string variant = "te";
  double beta = 0.0;
  int d = 2;
  std::size_t n = 0;
  double k = 0.0;
  double value = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double level = 0.95;

  bool same_cell(const ResultRow& other) const noexcept;
  bool operator==(const ResultRow&) const = default;
};

class ResultTable {
 public:
  std::map<std::string, std::string>& metadata() noexcept { return metadata_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
  std::vector<ResultRow>& rows() noexcept { return rows_; }
  const std::vector<ResultRow>& rows() const noexcept { return rows_; }

  void add(ResultRow row) { rows_.push_back(std::move(row)); }
  /// First row whose key (model, variant, beta, d, n, k, level) matches.
  const ResultRow* find(const ResultRow& key) const noexcept;
  /// Critical value lookup ignoring the model column.
  const ResultRow* find_critical(const std::string& variant, double beta, int d, std::size_t n,
                                 double k, double level) const noexcept;

  /// '#'-prefixed "key: value" metadata lines, a header, one row per cell.
  std::string to_csv() const;
  std::string to_json() const;
  static ResultTable from_csv(const std::string& text);
  static ResultTable from_json(const std::string& text);

  /// Format chosen from the extension: ".json" or anything else for CSV.
  void save(const std::filesystem::path& path) const;
  static ResultTable load(const std::filesystem::path& path);

  bool operator==(const ResultTable&) const = default;

 private:
  std::map<std::string, std::string> metadata_;
  std::vector<ResultRow> rows_;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace rggu
