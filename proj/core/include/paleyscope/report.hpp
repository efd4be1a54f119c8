#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace paleyscope {

/// Writes to `path.tmp` and renames over `path`, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// %.17g, with "nan"/"inf"/"-inf" spelled out.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  using Cell = std::variant<std::string, double, std::int64_t, bool>;
  void add_row(std::vector<Cell> row);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Pretty JSON with sorted keys (nlohmann's default object ordering) and a
/// trailing newline. Non-finite doubles must be stored as strings upstream.
std::string dump_json(const nlohmann::json& j);

/// Maps non-finite doubles to the strings "nan", "inf", "-inf".
nlohmann::json json_number(double v);

}  // namespace paleyscope
