#include "lobarena/util/csv.hpp"

#include <array>

namespace lobarena {

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot open '" + path + "' for writing");
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::header(std::initializer_list<std::string_view> cols) {
  first_field_ = true;
  for (auto c : cols) field(c);
  out_.put('\n');
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  first_field_ = true;
  for (const auto& c : cols) field(std::string_view(c));
  out_.put('\n');
}

void CsvWriter::field(std::int64_t v) {
  sep();
  std::array<char, 24> buf;
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out_.write(buf.data(), r.ptr - buf.data());
}

void CsvWriter::field(std::uint64_t v) {
  sep();
  std::array<char, 24> buf;
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out_.write(buf.data(), r.ptr - buf.data());
}

void CsvWriter::field(double v) {
  sep();
  std::array<char, 40> buf;
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out_.write(buf.data(), r.ptr - buf.data());
}

void CsvWriter::field(std::string_view v) {
  sep();
  out_.write(v.data(), static_cast<std::streamsize>(v.size()));
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

CsvReader::CsvReader(const std::string& path, std::string_view expected_header) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines_.push_back(line);
  }
  row_number_ = 0;
  if (!lines_.empty() && !expected_header.empty() && lines_[0] == expected_header) {
    next_line_ = 1;
    row_number_ = 1;
  }
}

bool CsvReader::next() {
  while (next_line_ < lines_.size() && lines_[next_line_].empty()) {
    ++next_line_;
    ++row_number_;
  }
  if (next_line_ >= lines_.size()) return false;
  fields_ = split_csv_line(lines_[next_line_]);
  ++next_line_;
  ++row_number_;
  return true;
}

void CsvReader::fail(const std::string& what) const {
  throw Error(path_ + ":" + std::to_string(row_number_) + ": " + what);
}

std::int64_t CsvReader::int_field(std::size_t i) const {
  if (i >= fields_.size()) fail("missing column " + std::to_string(i));
  std::int64_t v = 0;
  auto f = fields_[i];
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
    fail("bad integer '" + std::string(f) + "' in column " + std::to_string(i));
  }
  return v;
}

std::uint64_t CsvReader::uint_field(std::size_t i) const {
  if (i >= fields_.size()) fail("missing column " + std::to_string(i));
  std::uint64_t v = 0;
  auto f = fields_[i];
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
    fail("bad unsigned integer '" + std::string(f) + "' in column " + std::to_string(i));
  }
  return v;
}

double CsvReader::double_field(std::size_t i) const {
  if (i >= fields_.size()) fail("missing column " + std::to_string(i));
  double v = 0;
  auto f = fields_[i];
  auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
    fail("bad number '" + std::string(f) + "' in column " + std::to_string(i));
  }
  return v;
}

std::string_view CsvReader::str_field(std::size_t i) const {
  if (i >= fields_.size()) fail("missing column " + std::to_string(i));
  return fields_[i];
}

}  // namespace lobarena
