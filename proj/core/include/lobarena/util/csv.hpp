#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "lobarena/util/error.hpp"

namespace lobarena {

/// Deterministic CSV writer: integers verbatim, doubles via shortest
/// round-trip std::to_chars, '\n' line endings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();

  void header(std::initializer_list<std::string_view> cols);
  void header(const std::vector<std::string>& cols);

  template <typename... Fields>
  void row(const Fields&... fields) {
    first_field_ = true;
    (field(fields), ...);
    out_.put('\n');
  }

  void flush() { out_.flush(); }
  const std::string& path() const { return path_; }

 private:
  void sep() {
    if (!first_field_) out_.put(',');
    first_field_ = false;
  }
  void field(std::int64_t v);
  void field(std::uint64_t v);
  void field(std::uint32_t v) { field(static_cast<std::uint64_t>(v)); }
  void field(int v) { field(static_cast<std::int64_t>(v)); }
  void field(double v);
  void field(std::string_view v);
  void field(const std::string& v) { field(std::string_view(v)); }
  void field(const char* v) { field(std::string_view(v)); }

  std::string path_;
  std::ofstream out_;
  bool first_field_ = true;
};

/// Splits one CSV line; no quoting support (all files written here are plain).
std::vector<std::string_view> split_csv_line(std::string_view line);

/// Reads a whole CSV file. If the first line matches `expected_header` it is
/// consumed; otherwise it is treated as data (headerless files load too).
class CsvReader {
 public:
  CsvReader(const std::string& path, std::string_view expected_header);

  /// 1-based row number of the current data row (header counts as row 1).
  std::size_t row_number() const { return row_number_; }
  bool next();
  const std::vector<std::string_view>& fields() const { return fields_; }

  std::int64_t int_field(std::size_t i) const;
  std::uint64_t uint_field(std::size_t i) const;
  double double_field(std::size_t i) const;
  std::string_view str_field(std::size_t i) const;

  const std::string& path() const { return path_; }

 private:
  [[noreturn]] void fail(const std::string& what) const;

  std::string path_;
  std::vector<std::string> lines_;
  std::size_t next_line_ = 0;
  std::size_t row_number_ = 0;
  std::vector<std::string_view> fields_;
};

}  // namespace lobarena
